"""Verification suites. Each returns a :class:`stabcat.report.Report`."""
