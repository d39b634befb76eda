# equivarifier/formatters/mnist.py
from typing import Any

from .base import BaseFormatter

EVAL_FIELDS = ("joint_accuracy", "digit_accuracy", "angle_accuracy", "marginal_digit_accuracy")


class MnistFormatter(BaseFormatter):
    """Evaluation, equivariance, training and gradient-check reports."""

    KINDS = ("eval", "equivariance", "train", "gradcheck")

    def can_format(self, kind: str) -> bool:
        return kind in self.KINDS

    def format(self, kind: str, report: Any) -> str:
        if kind == "eval":
            rows = [[f, f"{getattr(report, f):.4f}"] for f in EVAL_FIELDS]
            lines = [f"✅ Evaluated {report.count} samples (seed {report.seed})", "",
                     self._to_markdown_table(["Metric", "Value"], rows), "", "Angle confusion per digit (rows true, columns predicted):"]
            for digit, matrix in sorted(report.angle_confusion.items()):
                lines.append(f"  {digit}: " + " | ".join(" ".join(f"{c:4d}" for c in row) for row in matrix))
            return "\n".join(lines)

        if kind == "equivariance":
            headers = ["image", "rot", "digit", "angle", "exact"] + [f"p{i}" for i in range(len(report.rows[0].probabilities))] if report.rows else []
            rows = [
                [r.image, 90 * r.rotation, r.predicted_digit, r.predicted_angle, "yes" if r.shift_exact else "NO"]
                + [f"{p:.3f}" for p in r.probabilities]
                for r in report.rows
            ]
            status = "✅ Outputs equal the block shift exactly" if report.passed else "❌ Equivariance violated"
            return "\n".join([
                self._to_aligned_table(headers, rows) if rows else "(no images)",
                "",
                f"{status}: {report.exact_matches}/{report.checks} exact, max deviation {report.max_deviation:.3e}, "
                f"digit-marginal deviation {report.max_marginal_deviation:.3e}",
            ])

        if kind == "train":
            rows = [[i + 1, f"{loss:.4f}"] for i, loss in enumerate(report.epoch_losses)]
            lines = [
                f"🚀 Trained on {report.samples} samples for {report.epochs} epoch(s) "
                f"(lr={report.learning_rate}, batch={report.batch_size}, seed={report.seed})",
                f"loss: {report.initial_loss:.4f} -> {report.final_loss:.4f}",
            ]
            if rows:
                lines += ["", self._to_markdown_table(["Epoch", "Mean loss"], rows)]
            if report.checkpoints:
                lines += ["", f"💾 Last checkpoint: {report.checkpoints[-1]}"]
            return "\n".join(lines)

        # gradcheck
        verdict = "✅" if report.passed() else "❌"
        return (
            f"{verdict} Gradient check: max relative error {report.max_relative_error:.3e} over {report.checked} "
            f"parameters ({report.skipped_kinks} skipped at kinks, {report.total_parameters} total, "
            f"epsilon {report.epsilon:g}, seed {report.seed}); worst: {report.worst_parameter}"
        )

    def to_csv(self, kind: str, report: Any) -> str:
        if kind == "eval":
            rows = [[f, getattr(report, f)] for f in EVAL_FIELDS] + [["count", report.count], ["seed", report.seed]]
            return self._csv(["metric", "value"], rows)
        if kind == "equivariance":
            width = len(report.rows[0].probabilities) if report.rows else 0
            headers = ["image", "rotation", "digit", "angle", "exact", "deviation"] + [f"p{i}" for i in range(width)]
            rows = [
                [r.image, r.rotation, r.predicted_digit, r.predicted_angle, int(r.shift_exact), repr(r.deviation)]
                + [repr(p) for p in r.probabilities]
                for r in report.rows
            ]
            return self._csv(headers, rows)
        if kind == "train":
            rows = [[i + 1, repr(loss)] for i, loss in enumerate(report.epoch_losses)]
            return self._csv(["epoch", "mean_loss"], rows)
        return self._csv(
            ["max_relative_error", "checked", "skipped_kinks", "total_parameters", "worst_parameter", "passed"],
            [[repr(report.max_relative_error), report.checked, report.skipped_kinks, report.total_parameters,
              report.worst_parameter, int(report.passed())]],
        )
