#!/usr/bin/env python3
"""Run the contextkernel CLI from a source checkout (no install needed).

Usage:
    python scripts/contextkernel.py validate --dataset data/MUTAG
    python scripts/contextkernel.py gram --dataset data/MUTAG --kernel tck --height 3 --normalize
    python scripts/contextkernel.py cv --dataset data/NCI1 --kernel tck --repeats 10 --threads 16
    python scripts/contextkernel.py bench --synthetic 100 --kernels odd,tck --heights 1..10
"""
from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from context_kernel.cli import main

if __name__ == "__main__":
    sys.exit(main())
