"""Figure regeneration for scarlab artifacts.

Each module renders one figure kind from the laboratory's CSV/JSON
artifacts. Scripts only draw: every number they plot was computed by the
primary package. Schema mismatches abort with exit code 2.
"""

__version__ = "0.1.0"
