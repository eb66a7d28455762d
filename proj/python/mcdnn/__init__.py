"""Multi-column convolutional network trainer: python surface of the C++ core."""

from mcdnn._core import (
    Dataset,
    EvaluationReport,
    NetDescriptor,
    Network,
    TrainState,
    apply_chain,
    classification_error,
    classify,
    classify_with_reject,
    distort,
    evaluate,
    fit,
    format_descriptor,
    gaussian_blur,
    inspect_descriptor,
    lab_to_rgb,
    load_cifar10,
    load_data_spec,
    load_idx,
    load_mcds,
    load_model,
    load_ppm_dir,
    lr_at_epoch,
    lr_crossing_epoch,
    pad_canvas,
    parse_descriptor,
    rgb_to_lab,
    save_mcds,
    save_model,
    second_guess,
    synthetic_shapes,
)

__all__ = [
    "Dataset",
    "EvaluationReport",
    "NetDescriptor",
    "Network",
    "TrainState",
    "apply_chain",
    "classification_error",
    "classify",
    "classify_with_reject",
    "distort",
    "evaluate",
    "fit",
    "format_descriptor",
    "gaussian_blur",
    "inspect_descriptor",
    "lab_to_rgb",
    "load_cifar10",
    "load_data_spec",
    "load_idx",
    "load_mcds",
    "load_model",
    "load_ppm_dir",
    "lr_at_epoch",
    "lr_crossing_epoch",
    "pad_canvas",
    "parse_descriptor",
    "rgb_to_lab",
    "save_mcds",
    "save_model",
    "second_guess",
    "synthetic_shapes",
]

__version__ = "0.1.0"
