use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn table() -> &'static Mutex<Vec<BigRational>> {
    static TABLE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![BigRational::one()]))
}

/// Bernoulli number `B_m` (convention `B_1 = -1/2`), exact.
pub fn bernoulli(m: usize) -> BigRational {
    let mut t = table().lock().unwrap();
    while t.len() <= m {
        let next = t.len();
        // sum_{j=0}^{next} C(next+1, j) B_j = 0
        let value = if next > 1 && next % 2 == 1 {
            BigRational::zero()
        } else {
            let mut binom = BigInt::one();
            let mut sum = BigRational::zero();
            for (j, b) in t.iter().enumerate() {
                if !b.is_zero() {
                    sum += b * BigRational::from_integer(binom.clone());
                }
                binom = binom * BigInt::from(next + 1 - j) / BigInt::from(j + 1);
            }
            -sum / BigRational::from_integer(BigInt::from(next + 1))
        };
        t.push(value);
    }
    t[m].clone()
}
