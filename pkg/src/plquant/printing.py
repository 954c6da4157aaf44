"""Canonical text output for expressions and tensors.

The printed grammar is the one accepted by :mod:`plquant.parse`, so every
printed value parses back to itself.
"""

from __future__ import annotations

from .scalar import Scalar


def _top_level_sum(text: str) -> bool:
    depth = 0
    for k, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and k > 0 and ch in "+-" and text[k - 1] == " ":
            return True
    return False


def mul_safe(text: str) -> str:
    return f"({text})" if _top_level_sum(text) else text


def format_mono(mono, names) -> list[str]:
    out = []
    for k, e in enumerate(mono):
        if e == 1:
            out.append(names[k])
        elif e:
            out.append(f"{names[k]}^{e}")
    return out


def format_linform(lin, names) -> str:
    parts = []
    for k, c in lin.items:
        neg = c.is_negative_looking()
        mag = -c if neg else c
        body = names[k] if mag.is_one() else f"{mul_safe(str(mag))}*{names[k]}"
        parts.append(("-" if neg else "+", body))
    return _join(parts)


def _join(parts) -> str:
    if not parts:
        return "0"
    out = []
    for k, (sign, body) in enumerate(parts):
        if k == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def format_term(coeff: Scalar, factors: list[str]) -> tuple[str, str]:
    neg = coeff.is_negative_looking()
    mag = -coeff if neg else coeff
    if not factors:
        body = str(mag)
    elif mag.is_one():
        body = "*".join(factors)
    else:
        body = "*".join([mul_safe(str(mag))] + factors)
    return ("-" if neg else "+", body)


def _exp_factor(lin, names) -> list[str]:
    return [f"exp({format_linform(lin, names)})"] if lin.items else []


def expr_parts(expr, fold_trig: bool = False, names=None) -> list[tuple[str, str]]:
    names = names or expr.space.coords
    if fold_trig:
        return [format_term(c, f) for c, f in _folded_terms(expr, names)]
    return [format_term(c, format_mono(m, names) + _exp_factor(l, names))
            for (m, l), c in expr.sorted_terms()]


def format_expr(expr, fold_trig: bool = False, names=None) -> str:
    return _join(expr_parts(expr, fold_trig, names))


# -- trig folding ----------------------------------------------------------------

def _folded_terms(expr, names):
    from .expr import LinForm
    field = expr.space.field
    half = field(1) / 2
    items = expr.sorted_terms()
    used = [False] * len(items)
    out = []
    for a, ((ma, la), ca) in enumerate(items):
        if used[a]:
            continue
        best = None
        for b in range(a + 1, len(items)):
            if used[b]:
                continue
            (mb, lb), cb = items[b]
            if mb != ma or not la.items or not lb.items:
                continue
            d = (la - lb).scale(half)
            imaginary = all(v.re.is_zero() and not v.im.is_zero() for _, v in d.items)
            if not (ca == cb or ca == -cb or (imaginary and ca == cb.conjugate())):
                continue
            m = (la + lb).scale(half)
            score = (len(d.items), len(m.items), b)
            if best is None or score < best[0]:
                best = (score, b, m, d)
        if best is None:
            used[a] = True
            out.append((ca, format_mono(ma, names) + _exp_factor(la, names)))
            continue
        _, b, mid, d = best
        used[a] = used[b] = True
        cb = items[b][1]
        cosh_c, sinh_c = ca + cb, ca - cb
        imaginary = all(v.re.is_zero() and not v.im.is_zero() for _, v in d.items)
        if imaginary:
            d = d.scale(-field.i)
            fn_even, fn_odd = "cos", "sin"
            sinh_c = sinh_c * field.i
        else:
            fn_even, fn_odd = "cosh", "sinh"
        if d.items[0][1].is_negative_looking():
            d = -d
            sinh_c = -sinh_c
        d_text = format_linform(LinForm(d.items), names)
        base = format_mono(ma, names) + _exp_factor(mid, names)
        if not cosh_c.is_zero():
            out.append((cosh_c, base + [f"{fn_even}({d_text})"]))
        if not sinh_c.is_zero():
            out.append((sinh_c, base + [f"{fn_odd}({d_text})"]))
    return out


# -- tensors ------------------------------------------------------------------------

def format_tensor(t, fold_trig: bool = False) -> str:
    """Terms printed as ``coeff*leg1 (x) leg2``; legs print 1 when trivial.

    With ``fold_trig`` the terms are grouped by one leg and the other leg is
    folded; the grouping giving fewer printed terms wins.
    """
    names = t.space.coords
    if fold_trig:
        return _join(_fold_tensor(t, names))
    parts = []
    for legs, c in t.sorted_terms():
        leg_texts = [_leg_text(m, l, names) for m, l in legs]
        parts.append(format_term(c, [" (x) ".join(leg_texts)]))
    return _join(parts)


def _leg_text(m, l, names) -> str:
    f = format_mono(m, names) + _exp_factor(l, names)
    return "*".join(f) if f else "1"


def _fold_tensor(t, names):
    from .expr import Expr
    space = t.space
    best = None
    for fold_leg in range(t.rank):
        groups: dict = {}
        order = []
        for legs, c in t.sorted_terms():
            rest = legs[:fold_leg] + legs[fold_leg + 1:]
            if rest not in groups:
                groups[rest] = {}
                order.append(rest)
            groups[rest][legs[fold_leg]] = c
        items = []
        for rest in order:
            for c, factors in _folded_terms(Expr(space, groups[rest]), names):
                items.append((c, "*".join(factors) if factors else "1", rest))
        parts = _render_items(items, fold_leg, names)
        if t.rank == 2:
            second = _refold_other_leg(items, fold_leg, space, names)
            if len(second) < len(parts):
                parts = second
        if best is None or len(parts) < len(best):
            best = parts
    return best


def _render_items(items, fold_leg, names):
    parts = []
    for c, text, rest in items:
        texts = [_leg_text(m, l, names) for m, l in rest]
        texts.insert(fold_leg, text)
        parts.append(format_term(c, [" (x) ".join(texts)]))
    return parts


def _refold_other_leg(items, fold_leg, space, names):
    """Group already-folded parts by their folded text and fold the remaining leg."""
    from .expr import Expr
    groups: dict = {}
    order = []
    for c, text, (rest,) in items:
        if text not in groups:
            groups[text] = {}
            order.append(text)
        g = groups[text]
        g[rest] = g[rest] + c if rest in g else c
    parts = []
    for text in order:
        terms = {k: v for k, v in groups[text].items() if not v.is_zero()}
        for c, factors in _folded_terms(Expr(space, terms), names):
            other = "*".join(factors) if factors else "1"
            texts = [other]
            texts.insert(fold_leg, text)
            parts.append(format_term(c, [" (x) ".join(texts)]))
    return parts
