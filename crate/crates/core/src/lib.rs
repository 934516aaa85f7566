//! Dual-modality congenital heart disease screening pipeline.
//!
//! Heart-sound recordings become 2D images (STFT magnitude, log-Mel
//! spectrogram, Gramian angular field); chest X-rays go through Gaussian
//! blur, histogram equalisation, contrast scaling and augmentation. Shallow
//! softmax classifiers are trained per representation and their posteriors,
//! or those of externally trained networks, are combined by late fusion:
//! accuracy-weighted, per-class-F1-weighted, or a logistic-regression
//! meta-learner.

pub mod audio;
pub mod dataset;
pub mod error;
pub mod fusion;
pub mod imaging;
pub mod matrix;
pub mod model;
pub mod representation;
pub mod synthetic;
pub mod util;

pub use error::{Error, Result};
pub use matrix::Matrix2D;
