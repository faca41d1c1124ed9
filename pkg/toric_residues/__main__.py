import sys

from toric_residues.cli import main

sys.exit(main())
