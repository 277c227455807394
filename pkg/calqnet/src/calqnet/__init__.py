"""Siamese CNN regressor for stereo miscalibration scores."""

from .data import PairDataset, load_pairs
from .evaluate import DegenerateInput, EvalReport, evaluate, predict
from .model import ModelSpec, SiameseRegressor
from .train import TrainConfig, load_weights, overfit_single_batch, save_weights, train

__version__ = "0.1.0"
