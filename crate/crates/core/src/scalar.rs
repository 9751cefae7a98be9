//! Numeric bound for the assignment solver.

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{Num, NumAssign};

/// A signed, ordered number. Integers, floats and exact rationals all qualify.
pub trait Scalar: Num + NumAssign + Neg<Output = Self> + PartialOrd + Copy + Debug {}

impl<T> Scalar for T where T: Num + NumAssign + Neg<Output = T> + PartialOrd + Copy + Debug {}
