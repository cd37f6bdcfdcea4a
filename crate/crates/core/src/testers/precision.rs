/// `f(p, q) = (p − q)/(p + q)`, or 0 when both arguments vanish.
///
/// If `|p − p̃| ≤ δ(p+q)` and `|q − q̃| ≤ δ(p+q)` with `δ ≤ 1/5`, then
/// `|f(p,q) − f(p̃,q̃)| ≤ 5δ`.
pub fn relative_difference(p: f64, q: f64) -> f64 {
    let s = p + q;
    if s == 0.0 {
        0.0
    } else {
        (p - q) / s
    }
}
