from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from core.econometrics import DemandCurve  # noqa: E402

log = logging.getLogger(__name__)

__all__: Tuple[str, ...] = ("render_demand_curve",)

# fixed salt so element ids in the SVG do not change between runs
SVG_HASH_SALT = "hydro-cba"


def render_demand_curve(curve: DemandCurve, path: Path, *, title: Optional[str] = None) -> Path:
    """Draws total predicted visits against the added fee as a static SVG.

    The file carries no creation date, so identical curves give identical bytes.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    with plt.rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(7.0, 4.5))
        ax.plot(curve.fees, curve.visits, color="#2166ac", linewidth=1.5)
        ax.fill_between(curve.fees, curve.visits, color="#67a9cf", alpha=0.3)
        ax.set_xlabel("Added fee (BDT)")
        ax.set_ylabel("Predicted visits")
        ax.set_title(title or f"Visit demand curve, choke fee {curve.choke_fee:,.0f} BDT")
        ax.set_xlim(left=0)
        ax.set_ylim(bottom=0)
        ax.grid(True, alpha=0.25)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)

    log.info("Wrote demand curve plot to %s", path)
    return path
