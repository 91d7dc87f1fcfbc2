//! The built-in catalog: every construction over admissible parameters, a
//! selection of direct products, and semidirect products with the three
//! action kinds. Entries are stored as group expressions so every label can
//! be fed back to the parser.

use std::collections::BTreeSet;

use crate::exec::Execution;
use crate::expr::parse;
use crate::group::FiniteGroup;

/// Semidirect products with a cyclic top group.
const SEMIDIRECT: &[&str] = &[
    "sd(C3, C4, pow:2)",
    "sd(C3, C8, pow:2)",
    "sd(C4, C4, pow:3)",
    "sd(C5, C4, pow:2)",
    "sd(C5, C4, pow:4)",
    "sd(C7, C3, pow:2)",
    "sd(C7, C6, pow:3)",
    "sd(C8, C2, pow:3)",
    "sd(C8, C2, pow:5)",
    "sd(C8, C4, pow:3)",
    "sd(C9, C3, pow:4)",
    "sd(C9, C6, pow:2)",
    "sd(C11, C5, pow:3)",
    "sd(C13, C3, pow:3)",
    "sd(C16, C2, pow:7)",
    "sd(C16, C2, pow:9)",
    "sd(C2 x C2, C2, shift)",
    "sd(C2 x C4, C2, inv)",
    "sd(C2 x C2 x C2, C3, shift)",
    "sd(C2 x C2 x C2, C6, shift)",
    "sd(C3 x C3, C2, inv)",
    "sd(C3 x C3, C2, shift)",
    "sd(C3 x C3, C4, shift)",
    "sd(C4 x C4, C2, shift)",
    "sd(C4 x C4, C2, inv)",
    "sd(C3 x C6, C2, inv)",
    "sd(C5 x C5, C2, shift)",
    "sd(C3 x C3 x C3, C3, shift)",
    "sd(C2 x C2 x C2 x C2, C4, shift)",
];

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Expressions of all catalog groups of order at most `max_order`, sorted by
/// order and then label.
pub fn catalog_expressions(max_order: usize) -> Vec<String> {
    let mut set: BTreeSet<(usize, String)> = BTreeSet::new();
    let mut push = |order: usize, label: String| {
        if order <= max_order {
            set.insert((order, label));
        }
    };

    for n in 1..=max_order {
        push(n, format!("C{n}"));
    }
    for n in 2..=max_order / 2 {
        push(2 * n, format!("D{n}"));
    }
    for n in 2..=max_order / 4 {
        push(4 * n, if n == 2 { "Q8".into() } else { format!("Dic{n}") });
    }
    for n in 3..=6 {
        push(factorial(n), format!("S{n}"));
        push(factorial(n) / 2, format!("A{n}"));
    }
    for n in 2..=12usize {
        push(n.pow(3), format!("Heis{n}"));
    }

    // non-cyclic abelian groups C_a x C_b (x C_c) with a | b | c
    let mut abelian: Vec<(usize, String)> = (2..=max_order).map(|n| (n, format!("C{n}"))).collect();
    for a in 2..=max_order {
        for b in (a..=max_order / a).filter(|b| b % a == 0) {
            abelian.push((a * b, format!("C{a} x C{b}")));
            for c in (b..=max_order / (a * b)).filter(|c| c % b == 0) {
                abelian.push((a * b * c, format!("C{a} x C{b} x C{c}")));
                for d in (c..=max_order / (a * b * c)).filter(|d| d % c == 0) {
                    abelian.push((a * b * c * d, format!("C{a} x C{b} x C{c} x C{d}")));
                }
            }
        }
    }
    for (order, label) in abelian.iter().filter(|(_, l)| l.contains(" x ")) {
        push(*order, label.clone());
    }

    let mut nonabelian: Vec<(usize, String)> = Vec::new();
    for n in 3..=max_order / 2 {
        nonabelian.push((2 * n, format!("D{n}")));
    }
    for n in 2..=max_order / 4 {
        nonabelian.push((4 * n, if n == 2 { "Q8".into() } else { format!("Dic{n}") }));
    }
    for n in 3..=6 {
        nonabelian.push((factorial(n), format!("S{n}")));
        if n >= 4 {
            nonabelian.push((factorial(n) / 2, format!("A{n}")));
        }
    }
    for n in 2..=12usize {
        nonabelian.push((n.pow(3), format!("Heis{n}")));
    }
    for s in SEMIDIRECT {
        let e = parse(s).expect("catalog expressions parse");
        push(e.order(), s.to_string());
        nonabelian.push((e.order(), s.to_string()));
    }
    nonabelian.retain(|(o, _)| *o <= max_order);

    for (no, nl) in &nonabelian {
        for (ao, al) in &abelian {
            if no * ao <= max_order {
                let right = if al.contains(" x ") { format!("({al})") } else { al.clone() };
                push(no * ao, format!("{nl} x {right}"));
            }
        }
        for (mo, ml) in &nonabelian {
            if nl <= ml && no * mo <= max_order {
                push(no * mo, format!("{nl} x {ml}"));
            }
        }
    }

    set.into_iter().map(|(_, label)| label).collect()
}

/// Builds every catalog group of order at most `max_order`.
pub fn catalog(max_order: usize, exec: Execution) -> Vec<FiniteGroup> {
    let exprs = catalog_expressions(max_order);
    exec.map(&exprs, |s| {
        parse(s).and_then(|e| e.evaluate()).unwrap_or_else(|err| panic!("catalog entry `{s}` failed to build: {err}"))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_catalog() {
        let eight: Vec<String> =
            catalog_expressions(8).into_iter().filter(|s| parse(s).unwrap().order() == 8).collect();
        for expected in ["C8", "D4", "Q8", "Heis2", "C2 x C4", "C2 x C2 x C2", "sd(C2 x C2, C2, shift)"] {
            assert!(eight.iter().any(|s| s == expected), "missing {expected}");
        }
        assert_eq!(catalog_expressions(1), vec!["C1".to_string()]);
    }

    #[test]
    fn labels_roundtrip_and_orders_respected() {
        let groups = catalog(32, Execution::default());
        assert!(groups.len() >= 20);
        for g in &groups {
            assert!(g.order() <= 32);
            assert_eq!(parse(g.label()).unwrap().to_string(), g.label());
        }
    }

    #[test]
    fn includes_products_of_nonabelian_groups() {
        let exprs = catalog_expressions(64);
        assert!(exprs.iter().any(|s| s == "D4 x D4"));
        assert!(exprs.iter().any(|s| s == "D4 x (C2 x C2)"));
        assert!(exprs.iter().any(|s| s == "S3 x S3"));
    }
}
