"""Induce a class prototype from a few instances and apply it back.

Builds the cattle/sheep prototype by greedy pairwise merging, renders the
merge lineage, projects the prototype onto an instance to get the
explanatory mask, then completes an occluded instance from the prototype.
Outputs land in demos/out/.
"""

import os

import numpy as np

import skelshape as ss
from skelshape.render import mask_overlay_png, merge_tree_figure
from skelshape.shapegen import TARI_CLASSES, make_shape

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

params = ss.MatchParams(beta1=30.0, beta2=0.6)
ci_cattle = TARI_CLASSES.index("cattle") * 1000
ci_sheep = TARI_CLASSES.index("sheep") * 1000

leaves = [
    ss.build_rts(ss.shape_from_mask(make_shape("cattle", ci_cattle + k), source_id=f"cattle_{k}"))
    for k in range(3)
] + [
    ss.build_rts(ss.shape_from_mask(make_shape("sheep", ci_sheep + k), source_id=f"sheep_{k}"))
    for k in range(2)
]

grts, tree = ss.generalize_set(leaves, label="quadruped", params=params)
print(f"prototype from {grts.count} shapes keeps {grts.n_endpoints} common parts")
print(f"exemplar instance: {grts.exemplar_id}")
merge_tree_figure(tree).save(os.path.join(OUT, "merge_tree.svg"))

# project the prototype onto a fresh cattle instance
inst_mask = make_shape("cattle", ci_cattle + 3)
inst_shape = ss.shape_from_mask(inst_mask, source_id="cattle_3")
inst = ss.build_rts(inst_shape)
applied = ss.apply_character(grts, inst, params)
print(
    f"application cost {applied.total_cost:.3f}; instance parts without a prototype "
    f"part: {list(applied.unmatched_instance)}; prototype parts unseen in the "
    f"instance: {list(applied.unmatched_grts)}"
)
mask_overlay_png(inst_shape.foreground, applied.mask, os.path.join(OUT, "character_mask.png"))

# occlude a third of the canvas and let the prototype fill the gap back in
occluded = inst_mask.copy()
occluded[:, : occluded.shape[1] // 3] = False
osh = ss.shape_from_mask(occluded, source_id="cattle_3_occluded")
orts = ss.build_rts(osh)
completed = ss.complete_shape(grts, orts, osh.foreground, params)
print(
    f"completion drew {len(completed.unmatched_grts)} missing part(s) "
    f"at scale {completed.transform.scale:.2f}"
)
mask_overlay_png(completed.completed, completed.added, os.path.join(OUT, "completed.png"))
print(f"wrote {OUT}/merge_tree.svg, character_mask.png, completed.png")
