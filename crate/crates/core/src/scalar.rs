//! Floating-point element type shared by the embedding code.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Tag written into checkpoints.
    const NAME: &'static str;

    /// Exact bit pattern as lowercase hex.
    fn to_hex(self) -> String;
    fn from_hex(s: &str) -> Option<Self>;

    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 converts to every scalar type")
    }

    fn f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Scalar for f32 {
    const NAME: &'static str = "f32";

    fn to_hex(self) -> String {
        format!("{:08x}", self.to_bits())
    }

    fn from_hex(s: &str) -> Option<Self> {
        (s.len() == 8)
            .then(|| u32::from_str_radix(s, 16).ok())
            .flatten()
            .map(f32::from_bits)
    }
}

impl Scalar for f64 {
    const NAME: &'static str = "f64";

    fn to_hex(self) -> String {
        format!("{:016x}", self.to_bits())
    }

    fn from_hex(s: &str) -> Option<Self> {
        (s.len() == 16)
            .then(|| u64::from_str_radix(s, 16).ok())
            .flatten()
            .map(f64::from_bits)
    }
}

#[inline]
pub fn sigmoid<T: Scalar>(x: T) -> T {
    if x >= T::zero() {
        T::one() / (T::one() + (-x).exp())
    } else {
        let e = x.exp();
        e / (T::one() + e)
    }
}

/// `ln(1 + e^x)` without overflow.
#[inline]
pub fn softplus<T: Scalar>(x: T) -> T {
    if x > T::zero() {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_round_trip() {
        for x in [0.0f64, -0.0, 1.5, f64::MIN_POSITIVE, -3.25e-300] {
            assert_eq!(f64::from_hex(&x.to_hex()).unwrap().to_bits(), x.to_bits());
        }
        for x in [0.0f32, 7.125, -1e-30] {
            assert_eq!(f32::from_hex(&x.to_hex()).unwrap().to_bits(), x.to_bits());
        }
        assert!(f64::from_hex("abc").is_none());
        assert!(f32::from_hex("zzzzzzzz").is_none());
    }

    #[test]
    fn softplus_is_stable() {
        assert!((softplus(0.0f64) - 2f64.ln()).abs() < 1e-15);
        assert!((softplus(800.0f64) - 800.0).abs() < 1e-12);
        assert!(softplus(-800.0f64) >= 0.0);
        assert!((sigmoid(0.0f32) - 0.5).abs() < 1e-7);
    }
}
