import itertools

from rwcert.rewriting import canonical_rotation, cycle_successors, string_successors


def accepted_words(cert, alphabet_size, max_len):
    """All words of length <= max_len accepted by ``cert`` (cyclically in cycle mode)."""
    out = []
    identity = frozenset((p, p) for p in range(cert.n))
    step = {}
    for p, a, q in cert.transitions:
        step.setdefault((p, a), set()).add(q)

    def go(word, rel):
        if cert.mode == "cycle":
            if word and any(p == q for p, q in rel):
                out.append(word)
        elif any(p in cert.initial and q in cert.final for p, q in rel):
            out.append(word)
        if len(word) == max_len:
            return
        for a in range(alphabet_size):
            nxt = frozenset((p, q) for p, s in rel for q in step.get((s, a), ()))
            if nxt:
                go(word + (a,), nxt)

    go((), identity)
    return out


def successor_property_violations(system, cert, max_len=8):
    """Accepted words (up to rotation in cycle mode) with no accepted successor."""
    bad = []
    for w in accepted_words(cert, len(system.alphabet), max_len):
        if cert.mode == "string":
            if not any(cert.accepts(res) for _, _, res in string_successors(w, system)):
                bad.append(w)
        else:
            if not any(cert.accepts(res) for _, res in cycle_successors(canonical_rotation(w), system)):
                bad.append(w)
    return bad


def all_words(alphabet_size, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(range(alphabet_size), repeat=n)


# acceptance criteria report, printed in the terminal summary by conftest
ACCEPTANCE = []


def report(criterion, ok, detail, status=None):
    line = f"{status or ('PASS' if ok else 'FAIL')}  criterion {criterion}: {detail}"
    ACCEPTANCE.append(line)
    print(line)
    return ok
