"""Pure-Python subset-scan kernels; compiled twin in _kernels.pyx.

Both kernels walk the subsets A of the scan side depth-first, carrying the
covered set N(A) of the other side as a bitmask.  A pair (A, other \\ N(A))
is counted when every scan-side vertex outside A keeps a neighbour in the
free part.  Two prunes keep degenerate inputs cheap: a vertex left out is
dead as soon as its whole neighbourhood is covered (coverage only grows
down the tree), and growing the coverage re-checks all vertices already
left out, so accepted leaves need no final scan.
"""


def scan_stats(rows, s, t, sel_k=-1, sel_f=-1):
    """Exact maximal-pair statistics over subsets of the scan side.

    rows[u] is the neighbourhood of scan-side vertex u as a bitmask over the
    other side (t bits).  Returns (total, k_hist, f_hist, scan_counts,
    other_counts, sel_count) where k is |A|, f the size of the free part,
    and sel_count the number of pairs with (k, f) == (sel_k, sel_f).
    """
    full = (1 << t) - 1
    total = 0
    sel_count = 0
    k_hist = [0] * (s + 1)
    f_hist = [0] * (t + 1)
    scan_counts = [0] * s
    other_counts = [0] * t
    in_a = [False] * s
    chosen = []

    def visit(u, nb):
        nonlocal total, sel_count
        if u == s:
            free = full & ~nb
            k = len(chosen)
            f = free.bit_count()
            total += 1
            k_hist[k] += 1
            f_hist[f] += 1
            for w in chosen:
                scan_counts[w] += 1
            x = free
            while x:
                low = x & -x
                other_counts[low.bit_length() - 1] += 1
                x ^= low
            if k == sel_k and f == sel_f:
                sel_count += 1
            return
        row = rows[u]
        grown = nb | row
        alive = True
        if grown != nb:
            free = full & ~grown
            for w in range(u):
                if not in_a[w] and rows[w] & free == 0:
                    alive = False
                    break
        if alive:
            in_a[u] = True
            chosen.append(u)
            visit(u + 1, grown)
            chosen.pop()
            in_a[u] = False
        if row & ~nb & full:
            visit(u + 1, nb)

    visit(0, 0)
    return total, k_hist, f_hist, scan_counts, other_counts, sel_count


def scan_free_hist(rows, s, t, lo_k=0):
    """Histogram of free-part sizes over all subsets A with |A| >= lo_k.

    No maximality filter: every subset of the scan side contributes, which
    is what counting stable (not necessarily maximal) pairs needs.
    """
    freq = [0] * (t + 1)

    def visit(u, nb, k):
        if k + (s - u) < lo_k:
            return
        if u == s:
            freq[t - nb.bit_count()] += 1
            return
        visit(u + 1, nb | rows[u], k + 1)
        visit(u + 1, nb, k)

    visit(0, 0, 0)
    return freq
