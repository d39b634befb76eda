import sys
import os
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

print("Step 1: Import groups")
try:
    import equivarifier.groups as groups
    print(f"Group families: {groups.registry.registry.families()}")
except ImportError as e:
    print(f"Groups failed: {e}")

print("Step 2: Import lifting")
try:
    import equivarifier.lifting  # noqa: F401
    print("Lifting imported")
except ImportError as e:
    print(f"Lifting failed: {e}")
    import traceback
    traceback.print_exc()

print("Step 3: Import CLI")
try:
    import equivarifier.cli  # noqa: F401
    print("CLI imported")
except Exception as e:
    print(f"CLI failed: {e}")
    import traceback
    traceback.print_exc()
