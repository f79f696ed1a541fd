import { exact } from "./format";
import type { Controls } from "./state";

// The explorer's dataset is replicate 0 of an `mc` run with the same master
// seed, so a one-replicate run reproduces the displayed collider coefficient
// exactly (mean_collider_model_coef of R=1 is that replicate's coefficient).
export function buildMcCommand(controls: Controls): string {
  return [
    "collider-lab mc",
    `--beta1 ${exact(controls.beta1)}`,
    `--alpha1 ${exact(controls.alpha1)}`,
    `--alpha2 ${exact(controls.alpha2)}`,
    `-n ${exact(controls.n)}`,
    "-R 1",
    `--seed ${exact(controls.seed)}`,
  ].join(" ");
}
