from metronoids.cli import main

raise SystemExit(main())
