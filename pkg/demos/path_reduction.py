"""Closed paths, their reductions, and the W counts on a real code."""
from codespectra import PathClass, brute_force_W, count_gamma, enumerate_path_classes, gold_code, reduce

path = PathClass.from_blocks([[0, 1, 2, 7], [3, 5, 8], [4], [6]])
tr = reduce(path)
print("start:", path, f"(l={path.l}, v={path.v})")
for case, u in tr.steps:
    print(f"  case {case} at index {u}")
print("final:", tr.final, f"(l={tr.final_l}, v={tr.final_v}), factor n^{tr.n_exponent}")

code = gold_code(3)
W, Wf = brute_force_W(path, code), brute_force_W(tr.final, code)
print(f"on {code.name}: W = {W} = 7^{tr.n_exponent} * {Wf}")

# Paths that reduce all the way down are counted by Narayana numbers.
print("\n l  v: classes in Gamma")
for l in range(1, 7):
    counts = {}
    for p in enumerate_path_classes(l):
        if reduce(p).in_gamma:
            counts[p.v] = counts.get(p.v, 0) + 1
    row = "  ".join(f"{counts.get(v, 0)}/{count_gamma(l, v)}" for v in range(1, l + 1))
    print(f"{l:>2}    {row}")
