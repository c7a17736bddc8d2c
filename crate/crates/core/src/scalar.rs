//! Scalar abstractions.
//!
//! [`Real`] covers the floating-point types used by every continuous formula.
//! [`Field`] is the weaker bound needed by the level probability, which is a
//! rational expression and therefore also evaluates exactly over
//! [`crate::Rational`].

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumOps, One, Zero};

pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    fn from_count(x: u64) -> Self {
        Self::from_u64(x).expect("count representable")
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static
{
}

pub trait Field: Clone + Zero + One + NumOps + FromPrimitive + PartialOrd + Debug {
    fn from_count(x: u64) -> Self {
        Self::from_u64(x).expect("count representable")
    }
}

impl<T> Field for T where T: Clone + Zero + One + NumOps + FromPrimitive + PartialOrd + Debug {}
