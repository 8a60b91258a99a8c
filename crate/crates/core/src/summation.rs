//! Neumaier-compensated sums with a fixed chunking, so that parallel
//! reductions reproduce the serial result bit for bit whatever the thread
//! count.

use num_complex::Complex64;
use rayon::prelude::*;

/// Terms per chunk. Chunk boundaries depend only on the input length.
pub const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another partial sum in (sum first, then its compensation).
    pub fn merge(&mut self, o: &Neumaier) {
        self.add(o.sum);
        self.add(o.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexNeumaier {
    re: Neumaier,
    im: Neumaier,
}

impl ComplexNeumaier {
    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn merge(&mut self, o: &ComplexNeumaier) {
        self.re.merge(&o.re);
        self.im.merge(&o.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

pub fn sum_f64(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = Neumaier::default();
    xs.into_iter().for_each(|x| acc.add(x));
    acc.value()
}

/// `Σ f(item)` over a slice: chunks are summed in parallel and the chunk
/// sums are merged serially in order.
pub fn par_sum_complex<T, F>(items: &[T], f: F) -> Complex64
where
    T: Sync,
    F: Fn(&T) -> Complex64 + Sync,
{
    let parts: Vec<ComplexNeumaier> = items
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = ComplexNeumaier::default();
            chunk.iter().for_each(|it| acc.add(f(it)));
            acc
        })
        .collect();
    let mut total = ComplexNeumaier::default();
    parts.iter().for_each(|p| total.merge(p));
    total.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_terms() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(sum_f64(xs), 2.0);
        assert_eq!(xs.iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn chunked_sum_is_thread_independent() {
        let items: Vec<f64> = (0..50_000)
            .map(|i| ((i as f64) * 0.37).sin() / (1.0 + i as f64))
            .collect();
        let f = |x: &f64| Complex64::new(*x, -*x * 0.5);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let a = one.install(|| par_sum_complex(&items, f));
        let b = three.install(|| par_sum_complex(&items, f));
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
        let serial = sum_f64(items.iter().copied());
        assert!((a.re - serial).abs() <= 1e-15 * serial.abs().max(1.0));
    }
}
