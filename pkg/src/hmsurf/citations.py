"""Theorem labels attached to verdicts and barrier errors.

Each label maps to a one-line statement of what the result gives the
code; the label strings are stable identifiers used in JSON output.
"""

CITATIONS = {
    "Thm 2.1": "no properly immersed minimal surface with this asymptotic boundary",
    "Cor. 2.2(1)": "degree-zero Jordan curve of width below pi bounds no proper minimal surface",
    "Cor. 2.2(1a)": "degree-zero Jordan curve in a slab of width below pi bounds nothing proper",
    "Cor. 2.2(1b)": "degree-zero Jordan curve in an open slab of width pi bounds nothing proper",
    "Cor. 2.2(2)": "degree-zero curve of width exactly pi: nonexistence assumes the surface "
                   "extends continuously to the curve",
    "Cor. 2.3": "curve in a slab of width below pi whose projection omits an open arc",
    "Thm 4.5": "Perron solution exists given barriers at every continuity point",
    "Cor. 4.6": "bounded data continuous off a finite set: a graph whose boundary adds "
                "vertical segments at the jumps",
    "Prop. 2.5": "translation-invariant family M_d realizes the model curves",
    "Thm 5.5": "exterior-circle admissible domain, heights within f(rho)",
    "Thm 5.9": "E-admissible domain, heights within H(cosh r)",
    "Remark 4.7(2)": "entire graph with continuous data on the ideal circle",
    "Remark 5.3": "no graph over the exterior of a circle exceeds height f(rho) at infinity",
}


def describe(label: str) -> str:
    """Statement attached to ``label``; unknown labels map to themselves."""
    return CITATIONS.get(label, label)
