#!/usr/bin/env python3
"""
Run the residue matrix lab from the command line.

Usage:
  python scripts/nbbd.py matrix --n 3 --m 5            # the 5x2 residue matrix
  python scripts/nbbd.py rank --n-max 8                # rank scan, CSV
  python scripts/nbbd.py minimax --n 3                 # Chebyshev fit, JSON
  python scripts/nbbd.py scan --n-max 8 --workers 4 --plot-data outputs/scan.dat
  python scripts/nbbd.py probe --claim all             # every claim probe, JSON
"""

import sys
from pathlib import Path

# Add project root to path so we can import from src/
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
