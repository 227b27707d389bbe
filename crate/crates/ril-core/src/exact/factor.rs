use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ExactError;

/// Effort knobs for `factor_partial`. One usable odd-valuation prime is all
/// the maximality test needs, so the defaults stay modest.
#[derive(Debug, Clone, Copy)]
pub struct FactorBudget {
    pub trial_bound: u64,
    pub rho_rounds: u32,
    pub rho_iterations: u64,
    pub miller_rabin_rounds: u32,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: 100_000,
            rho_rounds: 64,
            rho_iterations: 1 << 17,
            miller_rabin_rounds: 40,
        }
    }
}

/// sign · ∏ prime^exponent · cofactor reconstructs the input exactly.
/// `complete` iff cofactor = 1; every listed prime passed Miller-Rabin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFactorization {
    pub sign: i8,
    pub found: Vec<(BigUint, u32)>,
    pub cofactor: BigUint,
    pub complete: bool,
}

impl PartialFactorization {
    pub fn reconstruct(&self) -> BigInt {
        let mut acc = BigUint::one();
        for (p, e) in &self.found {
            acc *= p.pow(*e);
        }
        acc *= &self.cofactor;
        let v = BigInt::from(acc);
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }

    /// Primes with odd exponent, the candidates for the valuation criterion.
    pub fn odd_exponent_primes(&self) -> impl Iterator<Item = &BigUint> {
        self.found.iter().filter(|(_, e)| e % 2 == 1).map(|(p, _)| p)
    }
}

/// Miller-Rabin with pseudorandom bases drawn from a generator seeded by the
/// candidate itself, so verdicts are deterministic. Error < 4^-rounds.
pub fn is_probable_prime(n: &BigUint, rounds: u32) -> bool {
    if *n < BigUint::from(2u32) {
        return false;
    }
    for small in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let p = BigUint::from(small);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let two = BigUint::from(2u32);
    let n_minus_1 = n - BigUint::one();
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;

    let mut seed = [0u8; 32];
    let bytes = n.to_bytes_le();
    for (i, b) in bytes.iter().enumerate() {
        seed[i % 32] ^= *b;
    }
    let mut rng = ChaCha8Rng::from_seed(seed);
    'witness: for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigUint, budget: &FactorBudget, round: u32) -> Option<BigUint> {
    // Brent's cycle-finding variant with batched gcds.
    let c = BigUint::from(1u64 + round as u64);
    let mut y = BigUint::from(2u64 + round as u64) % n;
    let m = 128u64;
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut spent = 0u64;
    while g.is_one() && spent < budget.rho_iterations {
        x = y.clone();
        for _ in 0..r {
            y = (&y * &y + &c) % n;
        }
        let mut k = 0u64;
        while k < r && g.is_one() && spent < budget.rho_iterations {
            ys = y.clone();
            let lim = m.min(r - k);
            for _ in 0..lim {
                y = (&y * &y + &c) % n;
                let diff = if x > y { &x - &y } else { &y - &x };
                if diff.is_zero() {
                    return None;
                }
                q = (&q * &diff) % n;
            }
            g = q.gcd(n);
            k += lim;
            spent += lim;
        }
        r *= 2;
    }
    if g == *n {
        // backtrack one step at a time
        loop {
            ys = (&ys * &ys + &c) % n;
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            if diff.is_zero() {
                return None;
            }
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if g.is_one() || g == *n {
        None
    } else {
        Some(g)
    }
}

/// Trial division up to the budgeted bound followed by bounded Pollard-rho
/// rounds. Never fails; an unfactored remainder lands in `cofactor`.
pub fn factor_partial(n: &BigInt, budget: &FactorBudget) -> Result<PartialFactorization, ExactError> {
    if n.is_zero() {
        return Err(ExactError::ZeroInput);
    }
    let sign: i8 = if n.is_negative() { -1 } else { 1 };
    let mut remaining = n.abs().to_biguint().unwrap();
    let mut found: Vec<(BigUint, u32)> = Vec::new();

    let push = |found: &mut Vec<(BigUint, u32)>, p: BigUint, e: u32| {
        if let Some(entry) = found.iter_mut().find(|(q, _)| *q == p) {
            entry.1 += e;
        } else {
            found.push((p, e));
        }
    };

    // trial division
    let mut d = 2u64;
    while d <= budget.trial_bound {
        if let Some(r) = remaining.to_u64() {
            if r == 1 || d * d > r {
                break;
            }
        }
        let db = BigUint::from(d);
        if (&remaining % &db).is_zero() {
            let mut e = 0u32;
            while (&remaining % &db).is_zero() {
                remaining /= &db;
                e += 1;
            }
            push(&mut found, db, e);
        }
        d += if d == 2 { 1 } else { 2 };
    }

    // split what is left with rho, keeping a stack of composite pieces
    let mut rounds_left = budget.rho_rounds;
    let mut composites: Vec<(BigUint, u32)> = Vec::new();
    let mut cofactor = BigUint::one();
    if !remaining.is_one() {
        composites.push((remaining, 1));
    }
    while let Some((piece, mult)) = composites.pop() {
        if piece.is_one() {
            continue;
        }
        if is_probable_prime(&piece, budget.miller_rabin_rounds) {
            push(&mut found, piece, mult);
            continue;
        }
        let mut split = None;
        while rounds_left > 0 && split.is_none() {
            rounds_left -= 1;
            split = pollard_rho(&piece, budget, budget.rho_rounds - rounds_left);
        }
        match split {
            Some(f) => {
                let other = &piece / &f;
                composites.push((f, mult));
                composites.push((other, mult));
            }
            None => {
                cofactor *= piece.pow(mult);
            }
        }
    }
    found.sort();
    let complete = cofactor.is_one();
    Ok(PartialFactorization {
        sign,
        found,
        cofactor,
        complete,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factor_i64(n: i64) -> PartialFactorization {
        factor_partial(&BigInt::from(n), &FactorBudget::default()).unwrap()
    }

    #[test]
    fn small_examples() {
        let f = factor_i64(26);
        assert!(f.complete);
        assert_eq!(
            f.found,
            vec![(BigUint::from(2u32), 1), (BigUint::from(13u32), 1)]
        );

        let f = factor_i64(677);
        assert!(f.complete);
        assert_eq!(f.found, vec![(BigUint::from(677u32), 1)]);

        let f = factor_i64(-360);
        assert!(f.complete);
        assert_eq!(f.sign, -1);
        assert_eq!(f.reconstruct(), BigInt::from(-360));
    }

    #[test]
    fn budget_exhaustion_leaves_cofactor() {
        // product of two ~40-digit primes; rho cannot split it in budget
        let p: BigInt = "2425967623052370772757633156976982469681".parse().unwrap();
        let q: BigInt = "5991810554633396517767024967580894321153".parse().unwrap();
        let n = &p * &q;
        let budget = FactorBudget {
            trial_bound: 10_000,
            rho_rounds: 2,
            rho_iterations: 1 << 10,
            miller_rabin_rounds: 40,
        };
        let f = factor_partial(&n, &budget).unwrap();
        assert!(!f.complete);
        assert!(f.cofactor > BigUint::one());
        assert_eq!(f.reconstruct(), n);
    }

    #[test]
    fn rho_splits_medium_semiprime() {
        let n = BigInt::from(1_000_003i64) * BigInt::from(2_000_029i64);
        let f = factor_partial(&n, &FactorBudget::default()).unwrap();
        assert!(f.complete);
        assert_eq!(f.found.len(), 2);
        assert_eq!(f.reconstruct(), n);
    }

    #[test]
    fn primality_spot_checks() {
        assert!(is_probable_prime(&BigUint::from(677u32), 40));
        assert!(is_probable_prime(&(BigUint::from(2u32).pow(61) - 1u32), 40));
        assert!(!is_probable_prime(&BigUint::from(561u32), 40)); // Carmichael
        assert!(!is_probable_prime(&BigUint::one(), 40));
    }
}
