use crate::error::{Error, Result};

/// Levels of `S_0 + hbar^2 (C1 |x|^2 + C2)`:
/// `hbar sqrt(1 + 2 hbar^2 C1) (j + n/2) - hbar n / 2 + hbar^2 C2`, `j = 0..=j_max`.
///
/// Level `j` has multiplicity `C(n + j - 1, n - 1)`.
pub fn quadratic_exact_spectrum(
    c1: f64,
    c2: f64,
    n: usize,
    hbar: f64,
    j_max: u32,
) -> Result<Vec<f64>> {
    let freq2 = 1.0 + 2.0 * hbar * hbar * c1;
    if freq2 <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "frequency squared {freq2} is not positive"
        )));
    }
    let w = freq2.sqrt();
    let half = n as f64 / 2.0;
    Ok((0..=j_max)
        .map(|j| hbar * w * (f64::from(j) + half) - hbar * half + hbar * hbar * c2)
        .collect())
}
