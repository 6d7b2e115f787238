//! Exact q-series engine for Gukov-Manolescu series and inverted Habiro series.

pub mod asympt;
pub mod cli;
pub mod error;
pub mod knot;
pub mod omega;
pub mod qcomb;
pub mod residue;
pub mod series;
pub mod surgery;
pub mod transform;

pub use error::{Error, Result};
pub use series::{Delta, DegreeBound, Exp, Prec, QSeries};
