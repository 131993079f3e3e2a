//! Compensated (Kahan) summation.
//!
//! All series accumulation in this crate goes through [`KahanSum`] so that a
//! truncated evaluation and the converged reference walk bit-identical
//! accumulator states over their shared prefix of terms. That property lets
//! truncation errors be measured far below the 1-ulp noise floor of naive
//! summation: two sums that differ only in terms too small to perturb the
//! accumulator state compare exactly equal.

/// Classic two-register compensated accumulator.
///
/// `value()` applies the final correction (`sum + compensation`), which
/// resolves contributions roughly down to one ulp of the compensation term
/// rather than one ulp of the running sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    /// Start a sum at `init`.
    pub fn new(init: f64) -> Self {
        KahanSum {
            sum: init,
            compensation: 0.0,
        }
    }

    /// Add one term.
    pub fn add(&mut self, term: f64) {
        let y = term - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    /// Current compensated value.
    pub fn value(&self) -> f64 {
        self.sum - self.compensation
    }

    /// Exact bit pattern of the accumulator state, for convergence detection:
    /// a term that leaves these bits unchanged had no representable effect.
    pub fn state_bits(&self) -> (u64, u64) {
        (self.sum.to_bits(), self.compensation.to_bits())
    }

    /// Signed difference `self − other`, computed register by register.
    ///
    /// Rounding each accumulator to a single f64 first would quantize the
    /// difference at one ulp of the values; subtracting the registers keeps
    /// contributions that live only in the compensation terms, so two sums
    /// sharing a term prefix compare down to the true size of their differing
    /// tail.
    pub fn difference(&self, other: &KahanSum) -> f64 {
        (self.sum - other.sum) - (self.compensation - other.compensation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_lost_by_naive_sum() {
        // 1.0 followed by many 1e-17 increments: naive summation stays at 1.0.
        let mut naive = 1.0f64;
        let mut k = KahanSum::new(1.0);
        for _ in 0..1000 {
            naive += 1e-17;
            k.add(1e-17);
        }
        assert_eq!(naive, 1.0);
        let err = (k.value() - (1.0 + 1000.0 * 1e-17)).abs();
        assert!(err < 1e-18, "compensated sum off by {err}");
    }

    #[test]
    fn zero_terms_leave_state_unchanged() {
        let mut k = KahanSum::new(0.25);
        k.add(1e-3);
        let before = k.state_bits();
        k.add(0.0);
        assert_eq!(k.state_bits(), before);
    }

    #[test]
    fn sub_ulp_term_lands_in_compensation() {
        let mut k = KahanSum::new(1.0);
        let before = k.state_bits();
        k.add(1e-20);
        // The running sum cannot represent the change, but the state must.
        assert_ne!(k.state_bits(), before);
        assert_eq!(k.state_bits().0, 1.0f64.to_bits());
    }

    #[test]
    fn matches_plain_sum_for_exact_inputs() {
        let mut k = KahanSum::new(0.0);
        for x in [1.0, 2.0, 4.0, 8.0] {
            k.add(x);
        }
        assert_eq!(k.value(), 15.0);
    }

    #[test]
    fn difference_resolves_below_one_ulp_of_the_value() {
        // Two sums that share a prefix and differ by a term far below
        // ulp(1.0): the rounded values are bit-identical, but the register
        // difference recovers the term.
        let mut a = KahanSum::new(1.0);
        let mut b = KahanSum::new(1.0);
        a.add(0.5);
        b.add(0.5);
        b.add(3e-22);
        assert_eq!(a.value().to_bits(), b.value().to_bits());
        assert_eq!(a.difference(&b), -3e-22);
        assert_eq!(b.difference(&a), 3e-22);
        assert_eq!(a.difference(&a), 0.0);
    }
}
