"""p_n as the beta-weighted product of chain entries."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..exactpoly import HomoPoly
from .projective import iterate_pn


@dataclass
class ProductReport:
    k: int
    n: int
    ok: bool
    weights: tuple          # beta_{n-j} for p'_j, j = 0..n
    degree_pn: int
    degree_product: int
    detail: dict = field(default_factory=dict)

    def to_json(self):
        return {"k": self.k, "n": self.n, "ok": self.ok,
                "weights": [str(w) for w in self.weights],
                "degree_pn": self.degree_pn, "degree_product": self.degree_product,
                **self.detail}


def product_identity_check(chain, n, pn=None):
    """Compare p_n with (p'_0)^{beta_n} (p'_1)^{beta_{n-1}} ... (p'_n)^{beta_0}."""
    if chain.convention != "homogeneous":
        raise ValueError("the product identity lives in Z[a,b,c]")
    k = chain.k
    pn = iterate_pn(k, n) if pn is None else pn
    beta = chain.truncate(max(chain.n, n)).beta if chain.n >= n else None
    if beta is None:
        raise IndexError(f"chain only reaches n = {chain.n}")
    weights = tuple(beta[n - j] for j in range(n + 1))
    prod = HomoPoly.constant(1, chain.ring)
    # cheap factors first so the large products stay balanced
    for j in sorted(range(n + 1), key=lambda j: chain[j].nterms()):
        if weights[j]:
            prod = prod * chain[j] ** weights[j]
    dp = sum(w * chain[j].homogeneous_degree() for j, w in enumerate(weights))
    ok = prod == pn
    return ProductReport(k, n, ok, weights, pn.homogeneous_degree(), dp,
                         {"terms_pn": pn.nterms()})
