//! Special-function stack: real and complex gamma families, generic
//! Mellin-Barnes evaluation, and the named transform shapes built on it.

pub mod cgamma;
pub mod gamma;
pub mod meijer;
pub mod mellin;
pub mod quad;

/// Neumaier-compensated accumulator for sums whose terms span many orders of
/// magnitude.
#[derive(Debug, Default, Clone, Copy)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::Neumaier;

    #[test]
    fn compensation_beats_naive_summation() {
        let mut acc = Neumaier::default();
        acc.add(1.0);
        acc.add(1e100);
        acc.add(1.0);
        acc.add(-1e100);
        assert_eq!(acc.value(), 2.0);
    }
}
