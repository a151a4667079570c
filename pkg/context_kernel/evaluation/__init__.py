# context_kernel.evaluation package

from context_kernel.evaluation.nested_cv import CvGrid, CvReport, FoldError, nested_cv
from context_kernel.evaluation.svm import ConvergenceError, SvmError, SvmModel, svm_predict, svm_train

__all__ = [
    "ConvergenceError",
    "CvGrid",
    "CvReport",
    "FoldError",
    "SvmError",
    "SvmModel",
    "nested_cv",
    "svm_predict",
    "svm_train",
]
