"""JSON-lines run summary: one object per orbit, then a closing totals object."""

import json
from typing import IO, Dict, Iterator, List

from engine.prover import ProofResult


def summary_rows(result: ProofResult) -> Iterator[Dict]:
    catalog = result.catalog
    for entry in result.entries:
        row = {
            "orbit": entry.orbit_id,
            "dimension": catalog.dimension(entry.orbit_id),
            "restrictions": catalog.representative(entry.orbit_id).describe(),
            "bound": entry.bound,
            "technique": entry.kind.label,
            "steps": entry.steps,
            "seconds": round(entry.seconds, 6),
        }
        for key, value in entry.details:
            if key.startswith("forced_product_"):
                s, t, assignments, bound = value
                row[key] = {"s": s, "t": t, "assignments": assignments, "bound": bound}
            else:
                row[key] = value
        yield row
    yield {
        "format": result.certificate.header.format,
        "final_bound": result.final_bound,
        "orbits": len(result.entries),
        "steps": sum(entry.steps for entry in result.entries),
    }


def write_summary(result: ProofResult, sink: IO[str]) -> int:
    rows: List[Dict] = list(summary_rows(result))
    for row in rows:
        sink.write(json.dumps(row) + "\n")
    return len(rows)
