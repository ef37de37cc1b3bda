"""A walk through the library on the two-point Sierpinski space.

Run with ``python3 demos/sierpinski_tour.py``.
"""

from vapproach import (DistanceStructure, FiniteSet, a_epsilon, b_phi, check_closure, chain_frame,
                       from_tower, is_approach, parse_builtin, r_functor, reflect, standard_maps,
                       to_tower, two_chain)
from vapproach.base_change import Graph
from vapproach.convergence import non_approach_witness

two = two_chain()
X = FiniteSet(("open", "closed"))

# subsets are bitmasks and points are indices (0 = open, 1 = closed);
# "closed" lies in the closure of every nonempty set, "open" only of sets holding it
sierp = DistanceStructure.from_function(
    X, two, lambda A, x: two.top if A >> x & 1 or (A and x == 1) else two.bottom)
print("Sierpinski space over", two.name)
for A, row in sierp.to_labels():
    print(f"  c({set(A) or '{}'}) = {row}")

print("closure axioms:", check_closure(sierp).ok)
print("approach (finite unions go to joins):", is_approach(sierp)[0])

tower = to_tower(sierp)
print("tower round trip exact:", from_tower(tower) == sierp)

ell = r_functor(sierp)
print("ultrafilter convergence form:", ell.to_labels())
print("A_eps(R(c)) == c:", a_epsilon(ell) == sierp)

# moving the space to a three-element chain along the embedding iota
iota = standard_maps("iota_pi_o", chain_frame(3))["iota"]
moved = reflect(b_phi(Graph.from_structure(sierp), iota))
print("after base change to", moved.quantale.name, "the structure is still a closure space:",
      check_closure(moved.structure()).ok)

# a closure space that is not approach loses information on the round trip
three = chain_frame(3)
gap = DistanceStructure.constant(FiniteSet.points(2), three, three.top)
back = a_epsilon(r_functor(gap))
print("constant-top space is approach:", is_approach(gap)[0])
print("round trip strictly below it:", back.leq(gap) and back != gap)

delta = parse_builtin("delta_grid:0,1:0,1/2,1:lukasiewicz")
print("a distribution grid with", delta.size, "elements:", list(delta.labels))
