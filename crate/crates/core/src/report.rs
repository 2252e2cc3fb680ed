//! Text and machine renderings of classifications and battery reports.
//! Every rendering is a pure function of its input.

use std::fmt::Write;

use crate::fibered::Verdict;
use crate::topological::{BatteryReport, Classification, Routes};

/// Output flavour of the CLI reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Machine,
}

/// `A=B=C=D=true` when the routes agree, `A=true B=false ...` otherwise.
pub fn routes_compact(r: &Routes) -> String {
    if r.agree() {
        let names: Vec<&str> = r.routes.iter().map(|(n, _)| *n).collect();
        format!("{}={}", names.join("="), r.value())
    } else {
        r.to_string()
    }
}

/// One-line summary naming the strongest notion that holds and the first
/// one that fails.
pub fn summary(c: &Classification) -> String {
    if c.is_topological() {
        format!("topological (routes {})", routes_compact(&c.topological))
    } else if c.is_pretopological() {
        format!(
            "pretopological, not topological{} (routes {})",
            if c.is_fibration() { "" } else { ", not a fibration" },
            routes_compact(&c.topological)
        )
    } else if c.is_fibration() {
        "fibration, not pretopological".into()
    } else if c.prefibration() {
        "prefibration, not fibration".into()
    } else if c.faithful {
        "faithful, not a prefibration".into()
    } else {
        "not faithful, not a prefibration".into()
    }
}

fn verdict_line(out: &mut String, label: &str, v: &Verdict) {
    let _ = writeln!(out, "  {label}: {v}");
}

/// The classification report printed by `fibercheck classify`.
pub fn classification(c: &Classification, routes: bool, format: Format) -> String {
    match format {
        Format::Text => classification_text(c, routes),
        Format::Machine => classification_machine(c),
    }
}

fn classification_text(c: &Classification, routes: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "functor {}", c.name);
    let _ = writeln!(out, "exactness: {}", c.exactness());
    let _ = writeln!(out, "summary: {}", summary(c));
    for (name, v) in c.flags() {
        let _ = writeln!(out, "  {name:<15} {v}");
    }
    if routes {
        let _ = writeln!(out, "fibration routes:");
        verdict_line(&mut out, "prefibration", &c.fibration.prefibration);
        verdict_line(&mut out, "cartesian arrows compose", &c.fibration.cartesian_compose);
        verdict_line(&mut out, "creates initial arrows", &c.fibration.creates_initial_arrows);
        let _ = writeln!(out, "pretopological routes:");
        for (n, v) in &c.pretopological.routes {
            verdict_line(&mut out, n, v);
        }
        let _ = writeln!(out, "topological routes:");
        for (n, v) in &c.topological.routes {
            verdict_line(&mut out, n, v);
        }
        let _ = writeln!(out, "e-functor:");
        verdict_line(&mut out, "creates strict-epi families", &c.efunctor.creates);
        verdict_line(&mut out, "preserves strict-epi families", &c.efunctor.preserves);
        let _ = writeln!(out, "m-functor:");
        verdict_line(&mut out, "creates strict-mono families", &c.mfunctor.creates);
        verdict_line(&mut out, "preserves strict-mono families", &c.mfunctor.preserves);
        let _ = writeln!(out, "sections: top={} bottom={}", c.top_section, c.bot_section);
        let _ = writeln!(out, "opposite functor topological: {}", c.topological_opposite);
    }
    let bad = c.inconsistencies();
    if !bad.is_empty() {
        let _ = writeln!(out, "inconsistencies:");
        for b in bad {
            let _ = writeln!(out, "  {b}");
        }
    }
    out
}

fn machine_verdict(out: &mut String, key: &str, v: &Verdict) {
    let _ = writeln!(out, "{key}={}", v.holds);
    let _ = writeln!(out, "{key}.exactness={}", v.exactness);
}

fn classification_machine(c: &Classification) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "functor={}", c.name);
    let _ = writeln!(out, "exactness={}", c.exactness());
    for (name, v) in c.flags() {
        let _ = writeln!(out, "flag.{name}={v}");
    }
    machine_verdict(&mut out, "route.fibration.prefibration", &c.fibration.prefibration);
    machine_verdict(&mut out, "route.fibration.compose", &c.fibration.cartesian_compose);
    machine_verdict(&mut out, "route.fibration.initial-arrows", &c.fibration.creates_initial_arrows);
    for (n, v) in &c.pretopological.routes {
        machine_verdict(&mut out, &format!("route.pretopological.{n}"), v);
    }
    for (n, v) in &c.topological.routes {
        machine_verdict(&mut out, &format!("route.topological.{n}"), v);
    }
    let _ = writeln!(out, "section.top={}", c.top_section);
    let _ = writeln!(out, "section.bottom={}", c.bot_section);
    let _ = writeln!(out, "opposite.topological={}", c.topological_opposite);
    let _ = writeln!(out, "inconsistencies={}", c.inconsistencies().len());
    out
}

/// The property battery, one line per item.
pub fn battery(b: &BatteryReport, format: Format) -> String {
    let mut out = String::new();
    for i in &b.items {
        match format {
            Format::Text => {
                let _ = write!(out, "item {} {}: {}", i.number, i.title, i.status);
                if !i.detail.is_empty() {
                    let _ = write!(out, " ({})", i.detail);
                }
                out.push('\n');
            }
            Format::Machine => {
                let _ = writeln!(out, "battery.{}={}", i.number, i.status);
            }
        }
    }
    out
}
