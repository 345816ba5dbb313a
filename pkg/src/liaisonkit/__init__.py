"""Text analytics, retrieval and nowcasting toolkit for firm liaison summaries.

The package is organised around a paragraph-indexed store of interview
summaries.  Raw documents are parsed into typed blocks (`ingest`), enriched
with topic/tone scores (`classify`) and numeric rate extractions (`numex`),
then loaded into a searchable snapshot store (`store`).  Aggregate indicator
series (`indices`), embedding-driven keyword suggestions (`embed`), classifier
evaluation utilities (`evalx`) and a shrinkage-regression nowcasting harness
(`nowcast`) build on top.  `service` exposes everything over HTTP and `cli`
provides batch commands plus a thin HTTP client.
"""

__version__ = "0.1.0"
