"""Walk one silhouette through the pipeline and render what each stage sees.

Writes into demos/out/: the input silhouette, its pruned skeleton as ascii
art on stdout, the topological record as JSON, and an SVG showing the
root-to-tip paths, the picked axis, and the numbered tips.
"""

import json
import os

import numpy as np

import skelshape as ss
from skelshape.render import SvgCanvas, draw_rts
from skelshape.rts import rts_to_dict
from skelshape.shapegen import make_shape, write_pgm

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

mask = make_shape("hand", seed=1)
write_pgm(mask, os.path.join(OUT, "hand.pgm"))
shape = ss.shape_from_mask(mask, source_id="hand-demo")

field = ss.distance_transform(shape)
skel = ss.prune_skeleton(ss.extract_skeleton(field), significance=0.08)
print(f"skeleton: {len(skel.points())} pixels, max radius {skel.max_radius:.1f}px")

classes = ss.classify_points(skel)
kinds = [pc.kind for pc in classes.values()]
print(f"tips: {kinds.count('endpoint')}  junction pixels: {kinds.count('junction')}")

rts = ss.build_rts(shape)
print(f"record: {rts.n_endpoints} parts, axis {np.round(rts.spine.vector, 1)}")
for k, f in enumerate(rts.features):
    print(
        f"  part {k}: mass {f.mass:.3f}  length {f.length:.3f}  axis|cos| {f.axis_value:.2f}"
        f"  tip at ({f.endpoint_xy[0]:.0f}, {f.endpoint_xy[1]:.0f})"
    )

with open(os.path.join(OUT, "hand_rts.json"), "w") as fh:
    json.dump(rts_to_dict(rts), fh, indent=2)

canvas = SvgCanvas(rts.width, rts.height + 30)
draw_rts(canvas, rts, offset=(0, 20), label="hand")
canvas.save(os.path.join(OUT, "hand_record.svg"))
print(f"wrote {OUT}/hand.pgm, hand_rts.json, hand_record.svg")
