use std::io::Write;

use serde::Serialize;

use quatseq_core::closed_form::{
    acf_case, component_case, cross_case, cross_k_for_shift, predict_acf_s, predict_component_acf,
    predict_cross_ccf, Component, CrossDirection,
};
use quatseq_core::cyclotomy::{cyclotomic_number_cf, MAX_TABLE_PERIOD};
use quatseq_core::sequences::{build_s1, build_s2, index_label};
use quatseq_core::verification::{default_grid, run_suite};
use quatseq_core::{
    autocorrelation, build_class_table, build_sequence, cross_correlation, Class,
    CorrelationProfile, GaussianInt, Periodic, PrimePowerParams, SequenceKind,
};

use crate::{Command, ComponentArg, Failure, Format, Instance};

pub(crate) fn run(cmd: Command, out: &mut impl Write) -> Result<(), Failure> {
    match cmd {
        Command::Gen {
            instance,
            seq,
            format,
        } => gen(instance, seq, format, out),
        Command::Acf {
            instance,
            seq,
            format,
            max_n,
        } => acf(instance, seq, format, max_n, out),
        Command::Ccf {
            instance,
            a,
            b,
            format,
            max_n,
        } => ccf(instance, a, b, format, max_n, out),
        Command::Cycnum { instance, format } => cycnum(instance, format, out),
        Command::Classes {
            instance,
            level,
            format,
        } => classes(instance, level, format, out),
        Command::Verify {
            p,
            m,
            max_n,
            format,
        } => verify(&p, &m, max_n, format, out),
    }
}

fn params(instance: Instance) -> Result<PrimePowerParams, Failure> {
    let params = PrimePowerParams::new(instance.p, instance.m)?;
    if params.period() > MAX_TABLE_PERIOD {
        return Err(Failure::Usage(format!(
            "period {} exceeds the supported maximum of {MAX_TABLE_PERIOD}",
            params.period()
        )));
    }
    Ok(params)
}

fn bounded(instance: Instance, max_n: u64) -> Result<PrimePowerParams, Failure> {
    let params = params(instance)?;
    if params.period() > max_n {
        return Err(Failure::Usage(format!(
            "period {} exceeds --max-n {max_n}",
            params.period()
        )));
    }
    Ok(params)
}

fn no_raw(format: Format, command: &str) -> Result<(), Failure> {
    if format == Format::Raw {
        return Err(Failure::Usage(format!(
            "--format raw is only supported by gen, not {command}"
        )));
    }
    Ok(())
}

fn json(out: &mut impl Write, value: &impl Serialize) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn gen(
    instance: Instance,
    kind: SequenceKind,
    format: Format,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let params = params(instance)?;
    let seq = build_sequence(kind, &params);
    let symbols = seq.symbols();
    match format {
        Format::Raw => {
            let line: String = symbols.iter().map(|s| char::from(b'0' + s)).collect();
            writeln!(out, "{line}")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["index", "symbol", "class_label"])?;
            for (n, s) in symbols.iter().enumerate() {
                w.write_record([
                    n.to_string(),
                    s.to_string(),
                    index_label(kind, &params, n as u64),
                ])?;
            }
            w.flush()?;
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                p: u64,
                m: u32,
                g: u64,
                seq: SequenceKind,
                period: u64,
                symbols: &'a [u8],
                class_labels: Vec<String>,
            }
            json(
                out,
                &Doc {
                    p: params.p(),
                    m: params.m(),
                    g: params.g(),
                    seq: kind,
                    period: seq.period() as u64,
                    symbols,
                    class_labels: (0..symbols.len() as u64)
                        .map(|n| index_label(kind, &params, n))
                        .collect(),
                },
            )?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Row {
    shift: u64,
    value: GaussianInt,
    predicted: Option<GaussianInt>,
    branch_label: Option<String>,
    #[serde(rename = "match")]
    matches: Option<bool>,
}

type Predictor<'a> = Box<dyn Fn(u64) -> Option<(GaussianInt, String)> + 'a>;

fn rows(profile: &CorrelationProfile, predict: Predictor<'_>) -> Vec<Row> {
    (0..profile.period as u64)
        .map(|t| {
            let value = profile.at(t);
            let pred = predict(t);
            Row {
                shift: t,
                value,
                matches: pred.as_ref().map(|(p, _)| *p == value),
                predicted: pred.as_ref().map(|(p, _)| *p),
                branch_label: pred.map(|(_, l)| l),
            }
        })
        .collect()
}

fn write_rows(
    out: &mut impl Write,
    format: Format,
    shift_name: &str,
    header: impl Serialize,
    rows: &[Row],
) -> Result<(), Failure> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                shift_name,
                "re",
                "im",
                "predicted_re",
                "predicted_im",
                "branch_label",
                "match",
            ])?;
            for r in rows {
                let opt = |v: Option<String>| v.unwrap_or_default();
                w.write_record([
                    r.shift.to_string(),
                    r.value.re.to_string(),
                    r.value.im.to_string(),
                    opt(r.predicted.map(|p| p.re.to_string())),
                    opt(r.predicted.map(|p| p.im.to_string())),
                    opt(r.branch_label.clone()),
                    opt(r.matches.map(|m| m.to_string())),
                ])?;
            }
            w.flush()?;
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a, H> {
                #[serde(flatten)]
                header: H,
                shift: &'a str,
                rows: &'a [Row],
            }
            json(
                out,
                &Doc {
                    header,
                    shift: shift_name,
                    rows,
                },
            )?;
        }
        Format::Raw => unreachable!("rejected before computing"),
    }
    Ok(())
}

fn component_predictor(params: PrimePowerParams, which: Component) -> Predictor<'static> {
    Box::new(move |k| {
        Some(if k == 0 {
            (GaussianInt::real(params.q() as i64), "peak".to_string())
        } else {
            (
                predict_component_acf(which, k, &params),
                component_case(k, &params).to_string(),
            )
        })
    })
}

fn acf(
    instance: Instance,
    kind: SequenceKind,
    format: Format,
    max_n: u64,
    out: &mut impl Write,
) -> Result<(), Failure> {
    no_raw(format, "acf")?;
    let params = bounded(instance, max_n)?;
    let seq = build_sequence(kind, &params);
    let profile = autocorrelation(&seq)?;
    let predict: Predictor<'_> = match kind {
        SequenceKind::S => {
            Box::new(|t| Some((predict_acf_s(t, &params), acf_case(t, &params).to_string())))
        }
        SequenceKind::S1 => component_predictor(params, Component::S1),
        SequenceKind::S2 => component_predictor(params, Component::S2),
        SequenceKind::U | SequenceKind::V => Box::new(|_| None),
    };
    #[derive(Serialize)]
    struct Header {
        p: u64,
        m: u32,
        seq: SequenceKind,
        period: usize,
    }
    let header = Header {
        p: params.p(),
        m: params.m(),
        seq: kind,
        period: profile.period,
    };
    write_rows(out, format, "tau", header, &rows(&profile, predict))
}

fn ccf(
    instance: Instance,
    a: ComponentArg,
    b: ComponentArg,
    format: Format,
    max_n: u64,
    out: &mut impl Write,
) -> Result<(), Failure> {
    no_raw(format, "ccf")?;
    let params = bounded(instance, max_n)?;
    let build = |c: ComponentArg| match c {
        ComponentArg::S1 => build_s1(&params),
        ComponentArg::S2 => build_s2(&params),
    };
    let profile = cross_correlation(&build(a), &build(b))?;
    let cross = |dir: CrossDirection| -> Predictor<'static> {
        Box::new(move |t| {
            let k = cross_k_for_shift(dir, t, &params);
            Some((
                predict_cross_ccf(dir, k, &params),
                cross_case(k, &params).to_string(),
            ))
        })
    };
    let predict = match (a, b) {
        (ComponentArg::S1, ComponentArg::S1) => component_predictor(params, Component::S1),
        (ComponentArg::S2, ComponentArg::S2) => component_predictor(params, Component::S2),
        (ComponentArg::S1, ComponentArg::S2) => cross(CrossDirection::S1S2),
        (ComponentArg::S2, ComponentArg::S1) => cross(CrossDirection::S2S1),
    };
    let name = |c: ComponentArg| match c {
        ComponentArg::S1 => SequenceKind::S1,
        ComponentArg::S2 => SequenceKind::S2,
    };
    #[derive(Serialize)]
    struct Header {
        p: u64,
        m: u32,
        a: SequenceKind,
        b: SequenceKind,
        period: usize,
    }
    let header = Header {
        p: params.p(),
        m: params.m(),
        a: name(a),
        b: name(b),
        period: profile.period,
    };
    write_rows(out, format, "k", header, &rows(&profile, predict))
}

fn cycnum(instance: Instance, format: Format, out: &mut impl Write) -> Result<(), Failure> {
    no_raw(format, "cycnum")?;
    let params = params(instance)?;
    let table = build_class_table(&params)?;
    #[derive(Serialize)]
    struct Entry {
        i: u8,
        j: u8,
        brute: u64,
        closed: u64,
        #[serde(rename = "match")]
        matches: bool,
    }
    let entries: Vec<Entry> = Class::BOTH
        .iter()
        .flat_map(|&i| Class::BOTH.map(|j| (i, j)))
        .map(|(i, j)| {
            let brute = table.cyclotomic_number(i, j);
            let closed = cyclotomic_number_cf(i, j, &params);
            Entry {
                i: i.index(),
                j: j.index(),
                brute,
                closed,
                matches: brute == closed,
            }
        })
        .collect();
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["i", "j", "brute", "closed", "match"])?;
            for e in &entries {
                w.serialize((e.i, e.j, e.brute, e.closed, e.matches))?;
            }
            w.flush()?;
        }
        _ => {
            #[derive(Serialize)]
            struct Doc<'a> {
                p: u64,
                m: u32,
                entries: &'a [Entry],
            }
            json(
                out,
                &Doc {
                    p: params.p(),
                    m: params.m(),
                    entries: &entries,
                },
            )?;
        }
    }
    Ok(())
}

fn classes(
    instance: Instance,
    level: Option<u32>,
    format: Format,
    out: &mut impl Write,
) -> Result<(), Failure> {
    no_raw(format, "classes")?;
    let params = params(instance)?;
    let level = level.unwrap_or(params.m());
    if level == 0 || level > params.m() {
        return Err(Failure::Usage(format!(
            "invalid argument: --level must be in 1..={}, got {level}",
            params.m()
        )));
    }
    let table = build_class_table(&params)?;
    let lvl = table.level(level).expect("level checked above");
    let pj = lvl.prime_power();

    #[derive(Serialize)]
    struct Set {
        set: &'static str,
        modulus: u64,
        class: u8,
        size: usize,
        elements: Vec<u64>,
    }
    let mut sets = Vec::new();
    for c in Class::BOTH {
        sets.push(Set {
            set: "D",
            modulus: pj,
            class: c.index(),
            size: lvl.d_p(c).len(),
            elements: lvl.d_p(c).to_vec(),
        });
    }
    for c in Class::BOTH {
        sets.push(Set {
            set: "D",
            modulus: 2 * pj,
            class: c.index(),
            size: lvl.d_2p(c).len(),
            elements: lvl.d_2p(c).to_vec(),
        });
    }
    for c in Class::BOTH {
        let elements = lvl.two_d_p(c);
        sets.push(Set {
            set: "2D",
            modulus: 2 * pj,
            class: c.index(),
            size: elements.len(),
            elements,
        });
    }
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["set", "modulus", "class", "size", "elements"])?;
            for s in &sets {
                let elems: Vec<String> = s.elements.iter().map(u64::to_string).collect();
                w.write_record([
                    s.set.to_string(),
                    s.modulus.to_string(),
                    s.class.to_string(),
                    s.size.to_string(),
                    elems.join(" "),
                ])?;
            }
            w.flush()?;
        }
        _ => {
            #[derive(Serialize)]
            struct Doc<'a> {
                p: u64,
                m: u32,
                g: u64,
                level: u32,
                sets: &'a [Set],
            }
            json(
                out,
                &Doc {
                    p: params.p(),
                    m: params.m(),
                    g: params.g(),
                    level,
                    sets: &sets,
                },
            )?;
        }
    }
    Ok(())
}

fn verify(
    ps: &[u64],
    ms: &[u32],
    max_n: u64,
    format: Format,
    out: &mut impl Write,
) -> Result<(), Failure> {
    no_raw(format, "verify")?;
    let grid: Vec<(u64, u32)> = if ps.is_empty() {
        if !ms.is_empty() {
            return Err(Failure::Usage("--m requires --p".to_string()));
        }
        default_grid(max_n)
    } else {
        let mut grid = Vec::new();
        for &p in ps {
            // Validate before the exponent loop so a bad p is reported, not skipped.
            PrimePowerParams::new(p, 1)?;
            let exps: Vec<u32> = if ms.is_empty() {
                (1..)
                    .take_while(|&m| p.checked_pow(m).is_some_and(|q| 2 * q <= max_n))
                    .collect()
            } else {
                ms.to_vec()
            };
            for m in exps {
                match p.checked_pow(m).and_then(|q| q.checked_mul(2)) {
                    Some(n) if n <= max_n => grid.push((p, m)),
                    _ => eprintln!("skipping p={p} m={m}: period exceeds --max-n {max_n}"),
                }
            }
        }
        grid
    };
    if grid.is_empty() {
        return Err(Failure::Usage(format!(
            "no grid entries with period <= --max-n {max_n}"
        )));
    }
    let report = run_suite(&grid)?;
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["p", "m", "check", "cases", "mismatches", "pass"])?;
            for e in &report.entries {
                for c in &e.checks {
                    w.serialize((
                        e.p,
                        e.m,
                        c.id.as_str(),
                        c.cases,
                        c.mismatch_count,
                        c.passed(),
                    ))?;
                }
            }
            w.flush()?;
        }
        _ => json(out, &report)?,
    }
    eprintln!(
        "{} grid entries, omega convention {}, {} reassigned branches, pass: {}",
        report.entries.len(),
        report.omega_convention,
        report.typo_resolutions.len(),
        report.pass
    );
    if report.pass {
        Ok(())
    } else {
        Err(Failure::VerificationFailed)
    }
}
