"""Network deployment walkthrough: PPP sampling, nearest-BS association,
UE orientations and cooperator selection.

Run:
    python demos/demo_network_deployment.py

Writes demos/output/deployment.png
"""

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from sidesense import (DeploymentParams, build_deployment, sample_ppp,
                       select_cooperators)

OUT_DIR = os.path.join(os.path.dirname(__file__), "output")


def demo_ppp_statistics():
    print("=" * 70)
    print("Demo 1: Poisson point process statistics on the 100 m disk")
    print("=" * 70)
    rng = np.random.default_rng(0)
    for name, density in (("BS", 8e-4), ("UE", 2e-3)):
        counts = [len(sample_ppp(density, 100.0, rng)) for _ in range(2000)]
        expected = density * np.pi * 100.0 ** 2
        print(f"  {name} density {density:g}/m^2: mean count {np.mean(counts):6.2f} "
              f"(expected {expected:.2f}), std {np.std(counts):5.2f} "
              f"(Poisson predicts {np.sqrt(expected):.2f})")


def demo_deployment(seed=7):
    print("\n" + "=" * 70)
    print("Demo 2: one deployment with associations and cooperators")
    print("=" * 70)
    dep = build_deployment(DeploymentParams(seed=seed))
    coop = select_cooperators(dep, 30)
    print(f"  seed {seed}: {dep.num_bs} BSs, {dep.num_ue} UEs "
          f"(u0 at the origin), {len(coop)} cooperators incl. u0")
    loads = [len(s) for s in dep.bs_schedule]
    print(f"  UEs per BS: min {min(loads)}, max {max(loads)}, "
          f"{loads.count(0)} silent BSs")
    d_serv = np.hypot(*(dep.ue_xy - dep.bs_xy[dep.serving_bs]).T)
    print(f"  serving distance: median {np.median(d_serv):.1f} m, "
          f"max {d_serv.max():.1f} m")
    d_coop = np.hypot(*dep.ue_xy[coop].T)
    print(f"  cooperator distance from u0: max {d_coop.max():.1f} m")
    return dep, coop


def plot_deployment(dep, coop):
    fig, ax = plt.subplots(figsize=(7, 7))
    for ue in range(dep.num_ue):
        bs = dep.serving_bs[ue]
        ax.plot([dep.ue_xy[ue, 0], dep.bs_xy[bs, 0]],
                [dep.ue_xy[ue, 1], dep.bs_xy[bs, 1]],
                color="0.85", lw=0.6, zorder=1)
    ax.scatter(*dep.bs_xy.T, marker="^", s=60, color="tab:red", label="BS", zorder=3)
    ax.scatter(*dep.ue_xy.T, marker="o", s=12, color="tab:blue", label="UE", zorder=2)
    ax.scatter(*dep.ue_xy[coop].T, marker="o", s=30, facecolor="none",
               edgecolor="tab:green", label="cooperators", zorder=4)
    ax.scatter([0], [0], marker="*", s=160, color="k", label="u0", zorder=5)
    ax.add_patch(plt.Circle((0, 0), 100.0, fill=False, color="k", lw=0.8))
    ax.set_aspect("equal")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.legend(loc="upper right", fontsize=8)
    ax.set_title("PPP deployment with nearest-BS association")
    os.makedirs(OUT_DIR, exist_ok=True)
    path = os.path.join(OUT_DIR, "deployment.png")
    fig.savefig(path, dpi=130, bbox_inches="tight")
    print(f"\n  figure saved: {path}")


if __name__ == "__main__":
    demo_ppp_statistics()
    dep, coop = demo_deployment()
    plot_deployment(dep, coop)
