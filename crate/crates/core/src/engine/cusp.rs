use std::sync::{Mutex, OnceLock};

use super::recursion::wp_weight;
use crate::error::{Error, Result};
use crate::scalars::{binomial, int, Rational};

/// `V_3, V_4, …` computed so far (index `n − 3`).
fn table() -> &'static Mutex<Vec<Rational>> {
    static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![int(1)]))
}

/// Normalized volume of `M_{0,n}` by Zograf's recursion
///
/// ```text
/// V_n = ½ Σ_{i=1}^{n−3} i(n−i−2)/(n−1) · C(n−4, i−1) · C(n, i+1) · V_{i+2} V_{n−i},   V_3 = 1.
/// ```
pub fn v_cusp(n: usize) -> Result<Rational> {
    if n < 3 {
        return Err(Error::Domain(format!("n = {n}: volumes need n ≥ 3")));
    }
    let mut t = table().lock().unwrap_or_else(|e| e.into_inner());
    while t.len() + 3 <= n {
        let m = t.len() + 3;
        let mut v = int(0);
        for i in 1..=m - 3 {
            v += wp_weight(m, i) * binomial(m as u64, i as i64 + 1) * &t[i - 1] * &t[m - i - 3];
        }
        t.push(v);
    }
    Ok(t[n - 3].clone())
}

/// `(n, V_n)` for `3 ≤ n ≤ max_n`.
pub fn v_cusp_table(max_n: usize) -> Result<Vec<(usize, Rational)>> {
    (3..=max_n).map(|n| Ok((n, v_cusp(n)?))).collect()
}
