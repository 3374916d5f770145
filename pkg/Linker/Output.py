"""Text and machine-readable renderings of link results, corpus stats and
evaluation tables."""

import json
from typing import Dict, Iterable, List, Mapping, Sequence

from .Config import KINDS
from .Engine import LinkResponse
from .Index import Field, Index


def render_machine(response: LinkResponse) -> str:
    """Deterministic JSON document; the CLI and the service both emit exactly this."""
    return json.dumps(response.model_dump(mode="json"), sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def render_table(header: Sequence[str], rows: Iterable[Sequence[str]], min_width: int = 6) -> List[str]:
    rows = [list(r) for r in rows]
    widths = [max([min_width, len(h)] + [len(r[i]) for r in rows]) for i, h in enumerate(header)]
    line = " ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()
    out = [line, "-" * len(line)]
    for r in rows:
        out.append(" ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    return out


def render_text(response: LinkResponse) -> str:
    if not response.hits:
        return "No paper met the minimum score threshold.\n"
    header = ["Rank", "Paper", "Final", "Date"] + [k.capitalize() for k in KINDS]
    rows = [
        [str(h.rank), h.paper_id, f"{h.final_score:.4f}", f"{h.date_score:.4f}"]
        + [f"{h.field_scores.get(k, 0.0):.3f}" for k in KINDS]
        for h in response.hits
    ]
    lines = render_table(header, rows)
    lines.append("")
    for h in response.hits:
        doi = f" doi:{h.doi}" if h.doi else ""
        lines.append(f"{h.rank}. {h.title} ({h.journal}){doi}")
    return "\n".join(lines) + "\n"


def render_index_stats(index: Index) -> str:
    rows = []
    for field in Field:
        n_docs, avgdl = index.stats(field)
        rows.append([field.value, str(n_docs), f"{avgdl:.2f}", str(len(index.vocabulary(field)))])
    return "\n".join(render_table(["Field", "N", "avgdl", "Terms"], rows)) + "\n"


def render_accuracy_table(
    rows: Sequence[Mapping[str, object]], ks: Sequence[int], extra_columns: Sequence[str] = ()
) -> str:
    """rows: dicts with 'label', 'accuracy' ({k: value}), 'mean_latency_ms',
    'mean_postings_scanned', 'n_evaluated' plus any extra_columns."""
    header = ["Configuration"] + [f"top-{k}" for k in ks] + ["latency(ms)", "postings", "n"] + list(extra_columns)
    table_rows = []
    for row in rows:
        accuracy: Dict[int, float] = row["accuracy"]  # type: ignore[assignment]
        table_rows.append(
            [str(row["label"])]
            + [f"{accuracy[k]:.3f}" for k in ks]
            + [f"{row['mean_latency_ms']:.2f}", f"{row['mean_postings_scanned']:.1f}", str(row["n_evaluated"])]
            + [str(row.get(c, "")) for c in extra_columns]
        )
    return "\n".join(render_table(header, table_rows)) + "\n"
