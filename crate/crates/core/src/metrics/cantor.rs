use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::operators::Interpretation;
use crate::syntax::AtomId;

/// `ι(I) = Σ_{k ∈ I} 2·3^-k` with atoms numbered from 1 in enumeration
/// order. Ternary digits are all 0 or 2, so the image lies in the Cantor set.
pub fn cantor_embed(i: &Interpretation) -> BigRational {
    let n = i.base_len();
    let three = BigInt::from(3u8);
    // numerator over the common denominator 3^n
    let mut numerator = BigInt::zero();
    for a in i.atoms() {
        numerator += BigInt::from(2u8) * three.pow((n - a.index() - 1) as u32);
    }
    BigRational::new(numerator, three.pow(n as u32))
}

/// Inverse of [`cantor_embed`] for a base of `base_len` atoms. Rejects points
/// whose ternary expansion uses the digit 1 or is longer than `base_len`
/// places.
pub fn cantor_decode(x: &BigRational, base_len: usize) -> Result<Interpretation> {
    if x < &BigRational::zero() || x >= &BigRational::one() {
        return Err(Error::Decode(format!("{x} is outside [0, 1)")));
    }
    let three = BigRational::from_integer(BigInt::from(3u8));
    let mut rest = x.clone();
    let mut out = Interpretation::empty(base_len);
    for place in 0..base_len {
        rest *= &three;
        let digit = rest.floor();
        rest -= &digit;
        match digit.to_integer().to_u8() {
            Some(0) => {}
            Some(2) => {
                out.insert(AtomId(place));
            }
            _ => {
                return Err(Error::Decode(format!(
                    "ternary digit {} at place {} is not 0 or 2",
                    digit,
                    place + 1
                )))
            }
        }
    }
    if !rest.is_zero() {
        return Err(Error::Decode(format!(
            "{x} has no ternary expansion of at most {base_len} places"
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn embed_examples() {
        assert_eq!(cantor_embed(&Interpretation::empty(5)), ratio(0, 1));
        assert_eq!(
            cantor_embed(&Interpretation::from_atoms(1, [AtomId(0)])),
            ratio(2, 3)
        );
        assert_eq!(
            cantor_embed(&Interpretation::from_atoms(4, [AtomId(0)])),
            ratio(2, 3)
        );
        assert_eq!(cantor_embed(&Interpretation::full(2)), ratio(8, 9));
    }

    #[test]
    fn decode_rejects_digit_one() {
        assert!(matches!(
            cantor_decode(&ratio(1, 3), 3),
            Err(Error::Decode(_))
        ));
        assert!(matches!(
            cantor_decode(&ratio(1, 2), 3),
            Err(Error::Decode(_))
        ));
        assert!(matches!(
            cantor_decode(&ratio(2, 27), 2),
            Err(Error::Decode(_))
        ));
        assert!(matches!(
            cantor_decode(&ratio(1, 1), 2),
            Err(Error::Decode(_))
        ));
        assert!(matches!(
            cantor_decode(&ratio(-2, 3), 2),
            Err(Error::Decode(_))
        ));
        assert_eq!(
            cantor_decode(&ratio(20, 27), 3).unwrap(),
            Interpretation::from_atoms(3, [AtomId(0), AtomId(2)])
        );
    }

    #[test]
    fn injective_on_ten_atoms() {
        let images: std::collections::HashSet<BigRational> = Interpretation::enumerate(10)
            .map(|i| cantor_embed(&i))
            .collect();
        assert_eq!(images.len(), 1024);
    }

    proptest! {
        #[test]
        fn round_trip(n in 1usize..70, seed in any::<u64>()) {
            let i = Interpretation::from_atoms(
                n,
                (0..n).filter(|k| (seed.rotate_left(*k as u32) ^ (*k as u64 * 0x9e37)) & 1 == 1).map(AtomId),
            );
            prop_assert_eq!(cantor_decode(&cantor_embed(&i), n).unwrap(), i);
        }
    }
}
