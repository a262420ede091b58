//! Coarse geometry on finite extended metric spaces.
//!
//! Spaces carry an `∞`-valued distance matrix; maps are total relations.
//! The crate builds coarse gluings and the finite colimits derived from them
//! (coproducts, pushouts, cokernel pairs, coequalizers), κ-equaliser
//! filtrations, image factorisations and diagonal fillers, and certifies the
//! control bounds each construction promises.
//!
//! Everything is generic over a [`Scalar`]: `f64`, `f32` or the exact
//! `Rational64`. The aliases below fix the common choices.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::type_complexity, clippy::needless_range_loop)]

pub mod apsp;
pub mod certify;
pub mod colimits;
pub mod controls;
pub mod equalisers;
pub mod error;
pub mod ext;
pub mod families;
pub mod io;
pub mod maps;
pub mod metric;
pub mod random;
pub mod scalar;

pub use certify::{certify, AffineFit, BoundCheck, LawCheck, MapCertificate, StepProfile};
pub use colimits::{
    cokernel_pair, coarse_gluing, coequalizer, coproduct, mediating_morphism, pushout, pushout_stability,
    GluingRelation,
};
pub use controls::{
    compose_controls, sum_controls, superadditive_majorant, transpose_control, Continuity, ControlFn,
};
pub use equalisers::{diagonal_filler, filtration_report, image_factorisation, kappa_equaliser, regular_image, Square};
pub use error::{Error, Result};
pub use ext::{ExtDist, Extremum};
pub use maps::{closeness, CoarseMap, Relation};
pub use metric::{MetricSpace, Subspace};
pub use scalar::Scalar;

pub use num_rational::Rational64;

pub type Space = MetricSpace<f64>;
pub type Map = CoarseMap<f64>;
pub type Control = ControlFn<f64>;
pub type Dist = ExtDist<f64>;

pub type ExactSpace = MetricSpace<Rational64>;
pub type ExactMap = CoarseMap<Rational64>;
pub type ExactControl = ControlFn<Rational64>;
pub type ExactDist = ExtDist<Rational64>;
