//! Numeric formatting shared by all CSV outputs.

/// Decimal with 10 significant digits, trailing zeros trimmed; `NA` for NaN.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "NA".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "Inf".into() } else { "-Inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-6..16).contains(&exp) {
        let s = format!("{x:.9e}");
        let (mantissa, e) = s.split_once('e').expect("exponent present");
        return format!("{}e{e}", trim(mantissa));
    }
    let decimals = (9 - exp).max(0) as usize;
    trim(&format!("{x:.decimals$}")).to_string()
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::fmt_num;

    #[test]
    fn formats() {
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(21.0), "21");
        assert_eq!(fmt_num(1.0 / 3.0), "0.3333333333");
        assert_eq!(fmt_num(-2.0 / 3.0), "-0.6666666667");
        assert_eq!(fmt_num(12345.678901234), "12345.6789");
        assert_eq!(fmt_num(f64::NAN), "NA");
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(1.5e-9), "1.5e-9");
    }
}
