import sys
from pathlib import Path

# allow `import synthpairs` from any test module regardless of invocation dir
sys.path.insert(0, str(Path(__file__).parent))
