#!/usr/bin/env python
"""Regenerate data/lesmis.tsv from the networkx copy of the Les Miserables
coappearance network (D. E. Knuth, The Stanford GraphBase, 1993).

Only needed to rebuild the committed file; the package itself does not
depend on networkx.
"""

from __future__ import annotations

from pathlib import Path

import networkx as nx


def main() -> None:
    g = nx.les_miserables_graph()
    rows = sorted((min(u, v), max(u, v), int(d["weight"]))
                  for u, v, d in g.edges(data=True))
    out = Path(__file__).resolve().parents[1] / "data" / "lesmis.tsv"
    out.parent.mkdir(exist_ok=True)
    with out.open("w", encoding="utf-8", newline="") as fh:
        fh.write("% sym positive\n")
        fh.write("% Les Miserables character coappearance network "
                 "(D. E. Knuth, The Stanford GraphBase, 1993).\n")
        fh.write("% Columns: character_u character_v coappearance_count\n")
        for u, v, w in rows:
            fh.write(f"{u}\t{v}\t{w}\n")
    degs = dict(g.degree())
    print(f"wrote {out}: {g.number_of_nodes()} nodes, "
          f"{g.number_of_edges()} edges, max degree {max(degs.values())}")


if __name__ == "__main__":
    main()
