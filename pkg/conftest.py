import sys
from pathlib import Path

# tests import shared builders from tests/helpers.py
sys.path.insert(0, str(Path(__file__).parent / "tests"))
