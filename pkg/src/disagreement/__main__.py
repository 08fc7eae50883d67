from disagreement.cli import main

raise SystemExit(main())
