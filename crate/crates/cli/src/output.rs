//! `results.csv`, `results.json` and `bounds.svg`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use rsl_core::bounds::{BoundReport, Endpoint, TimeBound};

use crate::scenario::ScenarioRun;
use crate::CliError;

pub const CSV_HEADER: [&str; 12] = [
    "tau", "dM", "dS", "T_M", "T_tilde", "T_qsl", "T_g", "T_d", "x_M", "x_tilde", "epsilon", "grid_points",
];

/// C-style `%.12e`: twelve digits after the point and a signed exponent of at
/// least two digits. Infinities print as `inf`/`-inf`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Inverse of [`fmt_num`]; empty fields are `None`.
pub fn parse_num(s: &str) -> Option<f64> {
    match s {
        "" => None,
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => s.parse().ok(),
    }
}

fn endpoint(x: Endpoint) -> &'static str {
    match x {
        Endpoint::Initial => "0",
        Endpoint::Final => "tau",
    }
}

fn bound_field(b: Option<TimeBound<f64>>) -> String {
    b.map(|b| fmt_num(b.value())).unwrap_or_default()
}

/// The CSV fields of one report, in [`CSV_HEADER`] order.
pub fn csv_record(r: &BoundReport<f64>) -> Vec<String> {
    vec![
        fmt_num(r.tau),
        fmt_num(r.delta_m),
        fmt_num(r.delta_s),
        bound_field(Some(r.t_m)),
        bound_field(Some(r.t_tilde)),
        bound_field(Some(r.t_qsl)),
        bound_field(r.t_g),
        bound_field(r.t_d),
        endpoint(r.x_m).into(),
        endpoint(r.x_tilde).into(),
        fmt_num(r.epsilon_used),
        r.quadrature_points.to_string(),
    ]
}

pub fn csv_string(reports: &[BoundReport<f64>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in reports {
        w.write_record(csv_record(r)).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Output(e.to_string())
}

fn json_number(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(fmt_num(x))
    }
}

fn json_bound(b: Option<TimeBound<f64>>) -> Value {
    match b {
        None => Value::Null,
        Some(TimeBound::Finite(v)) => json_number(v),
        Some(TimeBound::Infinite(_)) => json!("inf"),
    }
}

fn report_json(r: &BoundReport<f64>) -> Value {
    let mut diagnostics = Map::new();
    for (name, b) in r.bounds() {
        if let TimeBound::Infinite(why) = b {
            diagnostics.insert(name.into(), json!(why.to_string()));
        }
    }
    json!({
        "tau": json_number(r.tau),
        "dM": json_number(r.delta_m),
        "dS": json_number(r.delta_s),
        "T_M": json_bound(Some(r.t_m)),
        "T_tilde": json_bound(Some(r.t_tilde)),
        "T_qsl": json_bound(Some(r.t_qsl)),
        "T_g": json_bound(r.t_g),
        "T_d": json_bound(r.t_d),
        "x_M": endpoint(r.x_m),
        "x_tilde": endpoint(r.x_tilde),
        "epsilon": json_number(r.epsilon_used),
        "grid_points": r.quadrature_points,
        "diagnostics": diagnostics,
    })
}

pub fn json_string(run: &ScenarioRun) -> String {
    let mut doc = json!({
        "scenario": run.scenario,
        "oracle": run.oracle,
        "reports": run.reports.iter().map(report_json).collect::<Vec<_>>(),
    });
    if let Some(s) = &run.separable {
        doc["separable_check"] = json!({
            "oracle_value": json_number(s.oracle_value),
            "search_value": json_number(s.search_value),
            "improvement": json_number(s.oracle_value - s.search_value),
            "gap": json_number(s.gap),
            "converged": s.converged,
        });
    }
    let mut out = serde_json::to_string_pretty(&doc).expect("JSON values serialise");
    out.push('\n');
    out
}

const SERIES: [(&str, &str); 5] = [
    ("T_M", "#1f77b4"),
    ("T_tilde", "#d62728"),
    ("T_qsl", "#2ca02c"),
    ("T_g", "#9467bd"),
    ("T_d", "#ff7f0e"),
];

/// Bound-versus-τ plot on linear axes with the line `T = τ` for reference.
/// Infinite values are left out of the curves.
pub fn svg_string(run: &ScenarioRun) -> String {
    let (w, h) = (640.0, 420.0);
    let (left, right, top, bottom) = (70.0, 150.0, 40.0, 50.0);
    let pw = w - left - right;
    let ph = h - top - bottom;
    let reports = &run.reports;
    let tau_max = reports.iter().map(|r| r.tau).fold(0.0, f64::max);
    let y_max = reports
        .iter()
        .flat_map(|r| r.bounds())
        .filter_map(|(_, b)| b.finite())
        .fold(tau_max, f64::max)
        * 1.05;
    let sx = |t: f64| left + pw * t / tau_max;
    let sy = |v: f64| top + ph * (1.0 - v / y_max);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{} ({} oracle)</text>"#,
        left + pw / 2.0,
        run.scenario,
        run.oracle
    );
    // axes and ticks
    let _ = writeln!(
        s,
        r#"<path d="M{left} {top} V{} H{}" fill="none" stroke="black"/>"#,
        top + ph,
        left + pw
    );
    for i in 0..=5 {
        let f = i as f64 / 5.0;
        let (x, y) = (left + pw * f, top + ph * (1.0 - f));
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{b}" x2="{x:.2}" y2="{b5}" stroke="black"/><text x="{x:.2}" y="{bt}" text-anchor="middle">{:.3}</text>"#,
            tau_max * f,
            b = top + ph,
            b5 = top + ph + 5.0,
            bt = top + ph + 18.0
        );
        let _ = writeln!(
            s,
            r#"<line x1="{l5}" y1="{y:.2}" x2="{left}" y2="{y:.2}" stroke="black"/><text x="{lt}" y="{yt:.2}" text-anchor="end">{:.3}</text>"#,
            y_max * f,
            l5 = left - 5.0,
            lt = left - 8.0,
            yt = y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">τ</text>"#,
        left + pw / 2.0,
        h - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">bound</text>"#,
        top + ph / 2.0,
        top + ph / 2.0
    );
    // reference diagonal T = τ
    let _ = writeln!(
        s,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="6 4"/>"#,
        sx(0.0),
        sy(0.0),
        sx(tau_max),
        sy(tau_max)
    );
    let mut legend = vec![("τ".to_string(), "gray", true)];
    for (name, color) in SERIES {
        let pts: Vec<(f64, f64)> = reports
            .iter()
            .filter_map(|r| {
                r.bounds()
                    .into_iter()
                    .find(|(n, _)| *n == name)
                    .and_then(|(_, b)| b.finite())
                    .map(|v| (r.tau, v))
            })
            .collect();
        if pts.is_empty() {
            continue;
        }
        let path: Vec<String> = pts.iter().map(|&(t, v)| format!("{:.2},{:.2}", sx(t), sy(v))).collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            path.join(" ")
        );
        for &(t, v) in &pts {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                sx(t),
                sy(v)
            );
        }
        legend.push((name.to_string(), color, false));
    }
    for (i, (name, color, dashed)) in legend.iter().enumerate() {
        let y = top + 10.0 + 18.0 * i as f64;
        let x = left + pw + 15.0;
        let dash = if *dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            s,
            r#"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="1.5"{dash}/><text x="{}" y="{}">{name}</text>"#,
            x + 25.0,
            x + 32.0,
            y + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the three result files into `dir`, creating it if needed.
pub fn emit_outputs(run: &ScenarioRun, dir: &Path) -> Result<(), CliError> {
    if run.reports.is_empty() {
        return Err(CliError::Output("no reports to write".into()));
    }
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    write(&dir.join("results.csv"), &csv_string(&run.reports)?)?;
    write(&dir.join("results.json"), &json_string(run))?;
    write(&dir.join("bounds.svg"), &svg_string(run))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rsl_core::bounds::Unbounded;

    fn report(tau: f64) -> BoundReport<f64> {
        BoundReport {
            tau,
            delta_m: -0.123456789012345,
            delta_s: 0.0,
            t_m: TimeBound::Finite(tau),
            t_tilde: TimeBound::Finite(0.9 * tau),
            t_qsl: TimeBound::Finite(1.0 / 3.0),
            t_g: None,
            t_d: Some(TimeBound::Infinite(Unbounded::SupportViolation)),
            x_m: Endpoint::Final,
            x_tilde: Endpoint::Initial,
            epsilon_used: 1e-6,
            quadrature_points: 1000,
        }
    }

    fn run(reports: Vec<BoundReport<f64>>) -> ScenarioRun {
        ScenarioRun {
            scenario: "dephasing",
            oracle: "werner-separable",
            reports,
            separable: None,
        }
    }

    #[test]
    fn c_style_exponent() {
        assert_eq!(fmt_num(1.0), "1.000000000000e+00");
        assert_eq!(fmt_num(-0.00123), "-1.230000000000e-03");
        assert_eq!(fmt_num(0.0), "0.000000000000e+00");
        assert_eq!(fmt_num(6.02e123), "6.020000000000e+123");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_layout() {
        let text = csv_string(&[report(0.5), report(1.0), report(2.0)]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "tau,dM,dS,T_M,T_tilde,T_qsl,T_g,T_d,x_M,x_tilde,epsilon,grid_points");
        let fields: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(fields[6], "");
        assert_eq!(fields[7], "inf");
        assert_eq!(fields[8], "tau");
        assert_eq!(fields[11], "1000");
    }

    #[test]
    fn csv_round_trip_to_twelve_digits() {
        let reports = vec![report(0.5), report(std::f64::consts::PI)];
        let text = csv_string(&reports).unwrap();
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        for (rec, r) in rd.records().zip(&reports) {
            let rec = rec.unwrap();
            let expect = [
                Some(r.tau),
                Some(r.delta_m),
                Some(r.delta_s),
                Some(r.t_m.value()),
                Some(r.t_tilde.value()),
                Some(r.t_qsl.value()),
                r.t_g.map(|b| b.value()),
                r.t_d.map(|b| b.value()),
            ];
            for (field, want) in rec.iter().zip(expect) {
                match (parse_num(field), want) {
                    (None, None) => {}
                    (Some(a), Some(b)) if a.is_infinite() => assert_eq!(a, b),
                    (Some(a), Some(b)) => assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300)),
                    other => panic!("mismatch {other:?}"),
                }
            }
            assert_eq!(parse_num(&rec[10]), Some(r.epsilon_used));
        }
    }

    #[test]
    fn json_nulls_and_sentinels() {
        let v: Value = serde_json::from_str(&json_string(&run(vec![report(1.0)]))).unwrap();
        let r = &v["reports"][0];
        assert!(r["T_g"].is_null());
        assert_eq!(r["T_d"], json!("inf"));
        assert_eq!(r["T_M"], json!(1.0));
        assert!(r["diagnostics"]["T_d"].as_str().unwrap().contains("support"));
    }

    #[test]
    fn svg_has_diagonal_and_no_external_refs() {
        let s = svg_string(&run(vec![report(0.5), report(1.0)]));
        assert!(s.starts_with("<svg"));
        assert!(s.contains("stroke-dasharray"));
        assert!(!s.contains("href"));
        assert!(s.contains("T_qsl"));
        assert!(!s.contains(">T_g<"));
    }

    #[test]
    fn unwritable_directory_is_an_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        let e = emit_outputs(&run(vec![report(1.0)]), &blocker.join("sub")).unwrap_err();
        assert!(matches!(e, CliError::Io { .. }));
    }
}
