from synlang.cli import main

raise SystemExit(main())
