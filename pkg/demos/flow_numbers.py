"""Exact circular flow numbers of small signed graphs from the brute-force oracle.

Shows three facts on tiny instances: a graph whose class always has exactly
three negative edges cannot get below 3, switching never changes the value,
and for all-positive graphs the integer flow number is the ceiling.

    python demos/flow_numbers.py
"""

from math import ceil

from signflow.analysis import min_negative_switch
from signflow.core import SignedGraph, switch
from signflow.generators import complete_multi, cycle_multi
from signflow.oracle import circular_flow_number, switch_class_flow_numbers


def show(name, g):
    res = circular_flow_number(g)
    low = min_negative_switch(g).min_negative_edges
    value = "inf" if res.is_infinite else str(res.phi_c)
    print(f"{name:28s} m={g.m:2d}  fewest negatives={low}  phi_c={value}")
    return res


print("-- small instances")
show("triangle, one negative", SignedGraph.from_edges(3, [(0, 1), (1, 2), (0, 2, -1)]))
show("C5", cycle_multi(5, 1))
show("K4", complete_multi(4, 1))
show("doubled triangle", cycle_multi(3, 2))
show("doubled triangle, 3 neg", cycle_multi(3, 2, "distinct:3"))
show("doubled K4, 3 negatives", complete_multi(4, 2, "distinct:3"))

print("\n-- one switching class")
g = cycle_multi(3, 2, "distinct:3")
values = switch_class_flow_numbers(g)
for s in sorted(values, key=sorted)[:6]:
    h = switch(g, s)
    print(f"switch at {sorted(s)!s:12s} negatives={len(h.negative_edges())}  phi_c={values[s]}")
print("distinct values in the class:", set(values.values()))

print("\n-- ceiling law on all-positive graphs")
for name, h in [("K4", complete_multi(4, 1)), ("C7", cycle_multi(7, 1)), ("K4 doubled", complete_multi(4, 2))]:
    res = circular_flow_number(h)
    print(f"{name:12s} phi_c={res.phi_c}  phi={res.phi}  ceil(phi_c)={ceil(res.phi_c)}")
