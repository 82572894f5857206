"""
NOON-passage simulator entry point.

Usage:
    python main.py pulses --out pulses.csv
    python main.py simulate --omega0 15 --delta 3 --eta 4
    python main.py fidelity-sweep --variable eta
    python main.py protocol --n 10 --gamma-f 0.2 --seed 0
"""

import sys

from api.cli import main


if __name__ == "__main__":
    sys.exit(main())
