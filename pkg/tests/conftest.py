from __future__ import annotations

import os

# keep the Monte-Carlo thread pool small and deterministic in CI-like runs
os.environ.setdefault("CYLSECT_THREADS", "4")
