"""Classifiers for tap windows: a from-scratch 1-D CNN and an OvO RBF SVM."""

from .cnn import (
    CnnModel,
    FitHistory,
    TrainResult,
    batch_loss,
    build_cnn,
    cnn_fit,
    cnn_forward,
    cnn_train,
    grad_check,
    parameter_count,
    predict,
    predict_proba,
)
from .common import TrainConfig, accuracy, stratified_kfold, stratified_split
from .modelio import (
    deserialize_model,
    deserialize_quant,
    load_model,
    save_model,
    serialize_model,
    serialize_quant,
)
from .svm import (
    DEFAULT_C_GRID,
    DEFAULT_GAMMA_GRID,
    KKT_TOL,
    BinaryProblem,
    SvmModel,
    rbf_kernel,
    smo_solve,
    svm_predict,
    svm_predict_batch,
    svm_train,
)

__all__ = [
    "CnnModel",
    "FitHistory",
    "TrainResult",
    "batch_loss",
    "build_cnn",
    "cnn_fit",
    "cnn_forward",
    "cnn_train",
    "grad_check",
    "parameter_count",
    "predict",
    "predict_proba",
    "TrainConfig",
    "accuracy",
    "stratified_kfold",
    "stratified_split",
    "deserialize_model",
    "deserialize_quant",
    "load_model",
    "save_model",
    "serialize_model",
    "serialize_quant",
    "DEFAULT_C_GRID",
    "DEFAULT_GAMMA_GRID",
    "KKT_TOL",
    "BinaryProblem",
    "SvmModel",
    "rbf_kernel",
    "smo_solve",
    "svm_predict",
    "svm_predict_batch",
    "svm_train",
]
