use super::Family;
use crate::scalar::Scalar;

/// Shock regressors for one observation, written into `out` in the order of
/// `Family::shock_column_names`. Zero shocks count as non-tightening.
pub fn shock_values(family: Family, eps: f64, out: &mut Vec<f64>) {
    out.clear();
    match family {
        Family::Linear => out.push(eps),
        Family::AbsSign => {
            out.push(eps);
            out.push(eps.abs());
        }
        Family::Piecewise => {
            out.push(eps.max(0.0));
            out.push(eps.min(0.0));
        }
        Family::SignConditioned => {
            let d = if eps > 0.0 { 1.0 } else { 0.0 };
            out.push(eps * d);
            out.push(eps * (1.0 - d));
        }
    }
}

/// Named shock columns for a whole series.
pub fn build_shock_columns<T: Scalar>(family: Family, eps: &[T]) -> Vec<(String, Vec<T>)> {
    let names = family.shock_column_names();
    let mut cols: Vec<Vec<T>> = vec![Vec::with_capacity(eps.len()); names.len()];
    let mut buf = Vec::with_capacity(2);
    for &e in eps {
        shock_values(family, e.as_f64(), &mut buf);
        for (c, &v) in cols.iter_mut().zip(&buf) {
            c.push(T::lit(v));
        }
    }
    names.iter().map(|n| n.to_string()).zip(cols).collect()
}
