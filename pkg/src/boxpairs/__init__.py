"""Report pairs of axis-parallel boxes whose intersection meets a query box."""
