# config/synth_config.py
import os
from dotenv import load_dotenv

load_dotenv()

DEFAULT_MODE = os.getenv("OCSYNTH_MODE", "naive")
DEFAULT_GUARD = os.getenv("OCSYNTH_GUARD", "past")
DEFAULT_ATOM_GUARD = os.getenv("OCSYNTH_ATOM_GUARD", "lookback")
DEFAULT_BOUND_CAP = int(os.getenv("OCSYNTH_BOUND_CAP", "6"))
DEFAULT_SEED = int(os.getenv("OCSYNTH_SEED", "2024"))

EQ_ARITY_CAP = int(os.getenv("OCSYNTH_EQ_ARITY_CAP", "8"))
DLO_ARITY_CAP = int(os.getenv("OCSYNTH_DLO_ARITY_CAP", "8"))
ABA_ARITY_CAP = int(os.getenv("OCSYNTH_ABA_ARITY_CAP", "4"))

NBA_STATE_CAP = int(os.getenv("OCSYNTH_NBA_STATE_CAP", "4096"))
GAME_POSITION_CAP = int(os.getenv("OCSYNTH_GAME_POSITION_CAP", "20000"))
SIMULATION_STEP_CAP = int(os.getenv("OCSYNTH_SIMULATION_STEP_CAP", "2000"))

LOG_LEVEL = os.getenv("OCSYNTH_LOG_LEVEL", "WARNING")
