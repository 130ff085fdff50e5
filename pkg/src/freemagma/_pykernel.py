"""Pure-Python term-table kernel.

The term table is a set of parallel ``array('q')`` columns indexed by handle:
``left`` (-1 for a generator), ``right`` (generator index for a leaf), ``size``.
Node lookup goes through a dict keyed by ``(left << 32) | right``.
"""

BACKEND = "python"


def intern_products(table, left, right, size, a_ids, b_ids):
    """Intern every product a*b (a-major order) and return the handles."""
    out = []
    append = out.append
    for a in a_ids:
        sa = size[a]
        base = a << 32
        for b in b_ids:
            key = base | b
            h = table.get(key)
            if h is None:
                h = len(left)
                table[key] = h
                left.append(a)
                right.append(b)
                size.append(sa + size[b])
            append(h)
    return out


def classify_range(left, right, size, zflag, tdepth):
    """Extend the classification columns to cover every interned handle.

    Children always have smaller handles than their parent, so one forward
    sweep suffices. ``tdepth[h]`` is the largest p with h in T_p.
    """
    for h in range(len(zflag), len(left)):
        a = left[h]
        if a < 0:
            zflag.append(0)
            tdepth.append(0)
            continue
        db = tdepth[right[h]]
        zflag.append(1 if db >= size[a] else 0)
        tdepth.append(0 if zflag[a] else db + 1)
