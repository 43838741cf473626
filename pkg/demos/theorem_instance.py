"""Walk through the construction on K4 with every edge quadrupled.

Two parallel edges of one class are negative, so the class always holds an
even number of negative edges and the signature is essentially 3-unbalanced.
The script prints each stage record and then checks the final flow.

    python demos/theorem_instance.py
"""

from signflow import construct_flow, edge_connectivity, theorem_applies
from signflow.core import boundary
from signflow.generators import complete_multi
from signflow.oracle import verify_pq_flow

k = 1
g = complete_multi(4, 4, "pair-in-class")
applies, lam, report = theorem_applies(g, k)
print(f"K4x4: {g.vertex_count} vertices, {g.m} edges, negative edges {list(g.negative_edges())}")
print(f"edge connectivity {lam}, fewest negatives in class {report.min_negative_edges}, "
      f"parity fixed: {report.parity_invariant}, hypotheses hold: {applies}")

cert = construct_flow(g, k)
for stage in cert.stages:
    print(f"\n[{stage.name}]")
    for key, value in stage.data.items():
        text = str(value)
        print(f"  {key}: {text if len(text) < 70 else text[:67] + '...'}")

check = verify_pq_flow(g, cert.flow, cert.p, cert.q)
print(f"\n({cert.p},{cert.q})-flow after {cert.repair_count} repair step(s): valid={bool(check)}")
print("values:", cert.flow.values)
print("boundary:", boundary(cert.flow))

# the positive part alone keeps plenty of connectivity after normalising
print("positive subgraph connectivity:", edge_connectivity(g, g.positive_edges()))
