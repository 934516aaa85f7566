//! Desk-scale classifiers: multinomial softmax regression over pooled
//! features, trained with shuffled mini-batch SGD and early stopping on
//! validation accuracy.

mod features;
mod io;
mod softmax;
mod train;

pub use features::{pool_features, FeatureScaler, FeatureVector};
pub use io::{read_cfs, write_cfs};
pub use softmax::{batch_loss, gradient_of_loss, predict_proba, Gradient, SoftmaxParams};
pub use train::{train_softmax, EarlyStopState, EpochRecord, TrainConfig, TrainLog};
