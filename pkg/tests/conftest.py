import os
import sys

# Make the reference oracles importable regardless of pytest import mode.
sys.path.insert(0, os.path.dirname(__file__))
