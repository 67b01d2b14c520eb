#!/usr/bin/env python3
"""
Switchgraph - command-line entry point

    python main.py train --train train.jsonl --val validation.jsonl --seed 1
    python main.py stats compare --paired out_a/eval_report.json out_b/eval_report.json
"""
import sys
from pathlib import Path

# Add the project root to Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from cli.main import main

if __name__ == "__main__":
    sys.exit(main())
