//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real floating-point scalar the engine is generic over (`f32` or `f64`).
///
/// The default thresholds scale with the precision of the type: the `f64`
/// values are the reference configuration, the `f32` ones are loosened so
/// the same pipelines still run end to end.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Default
{
    /// Largest accepted condition number for a Gramian.
    fn default_cond_cap() -> Self;
    /// Singular-value cutoff relative to the largest singular value.
    fn default_rank_tol() -> Self;
    /// Eigenvalue floor relative to the largest eigenvalue (oracle path).
    fn default_eig_floor() -> Self;
    /// Machine epsilon.
    fn eps() -> Self;
}

macro_rules! impl_real {
    ($t:ty, $cap:expr, $rank:expr, $floor:expr) => {
        impl Real for $t {
            fn default_cond_cap() -> Self {
                $cap
            }
            fn default_rank_tol() -> Self {
                $rank
            }
            fn default_eig_floor() -> Self {
                $floor
            }
            fn eps() -> Self {
                <$t>::EPSILON
            }
        }
    };
}

impl_real!(f64, 1e12, 1e-10, 1e-12);
impl_real!(f32, 1e5, 1e-5, 1e-6);

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Tolerance `tol` floored at a few hundred ulps of `T`, so fixed f64
/// thresholds stay meaningful for single precision.
#[inline]
pub fn tol<T: Real>(tol: f64) -> T {
    let floor = T::eps() * lit::<T>(256.0);
    let t = lit::<T>(tol);
    if t > floor {
        t
    } else {
        floor
    }
}
