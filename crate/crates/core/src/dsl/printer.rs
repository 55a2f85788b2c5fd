use super::render_twist;
use crate::motive::MotiveExpr;

/// Renders an expression in the surface syntax; parsing the result in the
/// same atlas gives back an expression with the same normal form.
pub fn print(e: &MotiveExpr) -> String {
    match e {
        MotiveExpr::Atom(name) => name.clone(),
        MotiveExpr::Unknown(name) => format!("?{name}"),
        MotiveExpr::Sum(items) => items.iter().map(print).collect::<Vec<_>>().join(" + "),
        MotiveExpr::TensorTwist(inner, p) => {
            let base = match inner.as_ref() {
                MotiveExpr::Sum(_) => format!("({})", print(inner)),
                other => print(other),
            };
            format!("{base} * {}", render_twist(p))
        }
    }
}
