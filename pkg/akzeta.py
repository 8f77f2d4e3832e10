#!/usr/bin/env python3
"""
Main entry point for the command-line interface
"""

import multiprocessing
import sys
import os

# Add the parent directory to Python path to allow imports
sys.path.insert(0, os.path.abspath(os.path.dirname(__file__)))

from src.cli import main

if __name__ == "__main__":
    # --jobs worker processes in a frozen build
    multiprocessing.freeze_support()
    main()
