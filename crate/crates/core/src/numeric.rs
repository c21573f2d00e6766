//! Small numeric helpers shared by the measurement modules.

use num_complex::Complex64;
use rayon::prelude::*;
use smallvec::SmallVec;

/// Complex vector value of a signal at one time point. Inline for the
/// dominant scalar case.
pub type CVec = SmallVec<[Complex64; 2]>;

/// Euclidean norm of a complex vector.
pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `|| a - c * b ||` without intermediate allocation.
pub fn defect_norm(a: &[Complex64], b: &[Complex64], c: Complex64) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - c * y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `|| a - b ||`.
pub fn diff_norm(a: &[Complex64], b: &[Complex64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Deterministic parallel sum of vector terms: fixed chunk boundaries,
/// sequential sums inside each chunk, chunk results combined in index
/// order. The result does not depend on the number of worker threads.
pub fn chunked_sum_cvec<F>(n: usize, chunk: usize, dim: usize, term: F) -> CVec
where
    F: Fn(usize) -> CVec + Sync + Send,
{
    let chunk = chunk.max(1);
    let partials: Vec<CVec> = (0..n.div_ceil(chunk))
        .into_par_iter()
        .map(|b| {
            let lo = b * chunk;
            let hi = ((b + 1) * chunk).min(n);
            let mut acc: CVec = std::iter::repeat_n(Complex64::new(0.0, 0.0), dim).collect();
            for j in lo..hi {
                for (a, z) in acc.iter_mut().zip(term(j).iter()) {
                    *a += z;
                }
            }
            acc
        })
        .collect();
    let mut total: CVec = std::iter::repeat_n(Complex64::new(0.0, 0.0), dim).collect();
    for part in partials {
        for (a, z) in total.iter_mut().zip(part.iter()) {
            *a += z;
        }
    }
    total
}

/// Deterministic parallel max over `0..n` (empty ranges give `f64::MIN`).
pub fn par_max<F>(n: usize, value: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    (0..n)
        .into_par_iter()
        .map(value)
        .reduce(|| f64::MIN, f64::max)
}

/// Composite trapezoid weight for node `j` of `0..n` (unit spacing):
/// one half at the two ends, one inside.
#[inline]
pub fn trapezoid_weight(j: usize, n: usize) -> f64 {
    if j == 0 || j + 1 == n {
        0.5
    } else {
        1.0
    }
}

/// Serialize a complex vector as `[[re, im], ...]`.
pub fn serialize_cvec<S: serde::Serializer>(
    v: &CVec,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = serializer.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

/// Serialize a list of complex vectors, each as `[[re, im], ...]`.
pub fn serialize_cvec_list<S: serde::Serializer>(
    vs: &[CVec],
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = serializer.serialize_seq(Some(vs.len()))?;
    for v in vs {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        seq.serialize_element(&pairs)?;
    }
    seq.end()
}

/// Serialize an optional complex vector.
pub fn serialize_opt_cvec<S: serde::Serializer>(
    v: &Option<CVec>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => serialize_cvec(v, serializer),
        None => serializer.serialize_none(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(j: usize) -> CVec {
        let mut v = CVec::new();
        v.push(Complex64::new((j as f64).sin(), -(j as f64) * 0.5));
        v
    }

    #[test]
    fn chunked_sum_matches_sequential() {
        let mut seq = Complex64::new(0.0, 0.0);
        for j in 0..1000 {
            seq += term(j)[0];
        }
        let par = chunked_sum_cvec(1000, 64, 1, term);
        assert!((seq - par[0]).norm() < 1e-9);
    }

    #[test]
    fn chunked_sum_is_chunk_deterministic() {
        let a = chunked_sum_cvec(10_001, 128, 1, term);
        let b = chunked_sum_cvec(10_001, 128, 1, term);
        assert_eq!(a[0], b[0]);
    }

    #[test]
    fn defect_norm_agrees_with_direct_formula() {
        let a = [Complex64::new(1.0, 2.0), Complex64::new(0.0, -1.0)];
        let b = [Complex64::new(0.5, 0.0), Complex64::new(1.0, 1.0)];
        let c = Complex64::cis(0.7);
        let direct = ((a[0] - c * b[0]).norm_sqr() + (a[1] - c * b[1]).norm_sqr()).sqrt();
        assert_eq!(defect_norm(&a, &b, c), direct);
    }
}
