//! Kernel-function toolkit. Kernels on real vectors, the unit disk and free
//! groups can be lifted by power series and have their Gram matrices
//! certified numerically. The `approx` module fits Gaussian-bump models with
//! measured sup-norm error.
//!
//! ```
//! use fockkernel::{certify_strict, zoo, PdVerdict, Point};
//!
//! let k = zoo::gaussian(1.0).unwrap();
//! let pts = [Point::real([0.0]), Point::real([1.0]), Point::real([2.0])];
//! let cert = certify_strict(&k, &pts, None).unwrap();
//! assert_eq!(cert.verdict, PdVerdict::StrictlyPositive);
//! ```

// `!(a < b)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod error;
pub mod free_group;
pub mod io;
pub mod kernel;
pub mod positivity;
pub mod report;
pub mod series;
pub mod zoo;

pub use error::{Error, Result};
pub use free_group::{edge_dist_sq, edge_inner, haagerup_embed, parse_word, EdgeVector, GroupWord};
pub use kernel::{feature_distance_sq, gram, Domain, GramMatrix, KernelSpec, Point};
pub use positivity::{
    certify_cnd, certify_psd, certify_strict, find_separating, schur_product,
    vandermonde_independence, CndCertificate, CndVerdict, PdCertificate, PdVerdict,
    SeparatingFunctional,
};
pub use series::{exp_lift, gaussian_from_lift, lift, LiftedKernel, PowerSeries};
