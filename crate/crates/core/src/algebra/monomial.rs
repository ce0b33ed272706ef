use std::cmp::Ordering;

/// Exponent vector of a monomial.
///
/// Ordered graded-lexicographically: total degree first, then the exponent of the first
/// variable, then the second, and so on. So with variables `(x, y)` we have `x > y > 1`
/// and `x^2 > x*y > y^2 > x`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn with_exponent(&self, index: usize, exponent: u32) -> Monomial {
        let mut e = self.0.clone();
        e[index] = exponent;
        Monomial(e)
    }

    pub fn without(&self, index: usize) -> Monomial {
        let mut e = self.0.clone();
        e.remove(index);
        Monomial(e)
    }

    pub fn push(&self, exponent: u32) -> Monomial {
        let mut e = self.0.clone();
        e.push(exponent);
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let x2 = Monomial::new(vec![2, 0]);
        let xy = Monomial::new(vec![1, 1]);
        let y2 = Monomial::new(vec![0, 2]);
        let x = Monomial::new(vec![1, 0]);
        let one = Monomial::one(2);
        let mut v = vec![one.clone(), y2.clone(), x.clone(), xy.clone(), x2.clone()];
        v.sort();
        assert_eq!(v, vec![one, x, y2, xy, x2]);
    }

    #[test]
    fn division() {
        let a = Monomial::new(vec![2, 1, 0]);
        let b = Monomial::new(vec![1, 1, 0]);
        assert_eq!(a.div(&b), Some(Monomial::new(vec![1, 0, 0])));
        assert_eq!(b.div(&a), None);
        assert_eq!(a.gcd(&Monomial::new(vec![0, 3, 1])), Monomial::new(vec![0, 1, 0]));
    }
}
