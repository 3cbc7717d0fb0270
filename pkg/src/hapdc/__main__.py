from hapdc.cli import main

raise SystemExit(main())
