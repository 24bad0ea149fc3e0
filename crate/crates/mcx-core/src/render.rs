//! Human-readable formatting.
//!
//! Numbers print with six significant digits, trailing zeros trimmed.
//! Standard-representation output lists terms in graded order (by unit
//! count, then subset value), suppressing zero terms and unit
//! coefficients: `1 - i1 + 2.5·i1i2`. Idempotent output is the component
//! list `[z1, z2, ...] over ε`, and multiperplex values print as an
//! epsilon sum like `3·ε1 + 4·ε2`.

use num_complex::Complex64;

use crate::idempotent::{IdempotentRep, Multiperplex};
use crate::standard::{Multicomplex, UnitIndexSet};

/// Six significant digits, fixed notation in the comfortable range and
/// scientific outside it, no trailing zeros.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if !(1e-4..1e6).contains(&a) {
        let exp = a.log10().floor() as i32;
        let mantissa = x / 10f64.powi(exp);
        let m = trim(&format!("{mantissa:.5}"));
        return format!("{m}e{exp}");
    }
    let exp = a.log10().floor() as i32;
    let decimals = (5 - exp).max(0) as usize;
    trim(&format!("{x:.decimals$}"))
}

fn trim(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

/// Complex scalar: `0`, `2`, `i`, `-i`, `2.5i`, `1+i`, `1-2i`.
pub fn fmt_complex(z: Complex64) -> String {
    let re = fmt_real(z.re);
    let im_mag = fmt_real(z.im.abs());
    let im_part = |mag: &str| {
        if mag == "1" {
            "i".to_string()
        } else {
            format!("{mag}i")
        }
    };
    if z.im == 0.0 {
        return re;
    }
    if z.re == 0.0 {
        let body = im_part(&im_mag);
        return if z.im < 0.0 { format!("-{body}") } else { body };
    }
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{re}{sign}{}", im_part(&im_mag))
}

/// Standard representation in graded term order.
pub fn fmt_standard(a: &Multicomplex) -> String {
    let mut masks: Vec<u32> = (0..a.level().coeff_count() as u32).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let mut out = String::new();
    for mask in masks {
        let c = a.coeffs()[mask as usize];
        if c == 0.0 {
            continue;
        }
        let mag = c.abs();
        let unit = if mask == 0 {
            String::new()
        } else {
            format!("{}", UnitIndexSet::from_bits(mask))
        };
        let body = if unit.is_empty() {
            fmt_real(mag)
        } else if mag == 1.0 {
            unit
        } else {
            format!("{}·{unit}", fmt_real(mag))
        };
        if out.is_empty() {
            if c < 0.0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0.0 { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

/// Idempotent representation: the component list.
pub fn fmt_idempotent(r: &IdempotentRep) -> String {
    let comps: Vec<String> = r.components().iter().map(|z| fmt_complex(*z)).collect();
    format!("[{}] over ε", comps.join(", "))
}

/// Multiperplex value as an epsilon sum, zero components suppressed.
pub fn fmt_multiperplex(d: &Multiperplex) -> String {
    let mut out = String::new();
    for (p, &c) in d.components().iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let mag = c.abs();
        let body = if mag == 1.0 {
            format!("ε{}", p + 1)
        } else {
            format!("{}·ε{}", fmt_real(mag), p + 1)
        };
        if out.is_empty() {
            if c < 0.0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0.0 { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}
