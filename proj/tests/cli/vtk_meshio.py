"""Reads a VTK file written by `chsd run` with meshio and checks its contents."""

import subprocess
import sys
import tempfile
from pathlib import Path

try:
    import meshio
except ImportError:
    sys.exit(77)

import numpy as np


def main(binary: str) -> int:
    with tempfile.TemporaryDirectory() as work:
        cfg = Path(work) / "run.cfg"
        cfg.write_text(
            f"nx = 4\nny = 4\nsteps = 2\ntau = 0.01\nwrite_vtk = true\noutput_dir = {work}/out\n"
        )
        subprocess.run([binary, "run", str(cfg)], check=True, capture_output=True)
        mesh = meshio.read(Path(work) / "out" / "final.vtk")
        triangles = mesh.cells_dict["triangle"]
        assert triangles.shape == (32, 3), triangles.shape
        assert mesh.points.shape == (25, 3), mesh.points.shape
        for name in ("phi", "mu", "p"):
            assert mesh.point_data[name].shape[0] == 25, name
        assert mesh.point_data["u"].shape == (25, 3)
        assert np.all(np.isfinite(mesh.point_data["phi"]))
        assert np.abs(mesh.point_data["phi"]).max() < 1.0
    print("meshio read ok")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1]))
