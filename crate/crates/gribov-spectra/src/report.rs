//! CSV and human-readable serialization.
//!
//! CSV schema: first line `# gribov-spectra v<semver>`, second line the
//! column header, then data rows. Floating-point values are printed with 17
//! significant digits. Constant metadata (couplings, grid size, tolerances)
//! is carried as ordinary columns repeated per row, so every file is
//! self-describing and byte-identical across reruns of the same invocation.

use std::io::{self, Write};

use crate::model::params::{GribovParams, KernelFrame};
use crate::spectral::SpectralResult;
use crate::studies::StudyReport;
use crate::verify::VerifyReport;
use crate::{OperatorMatrix, Real};

/// First line of every CSV file.
pub fn csv_banner() -> String {
    format!("# gribov-spectra v{}", env!("CARGO_PKG_VERSION"))
}

/// 17 significant digits, scientific notation.
pub fn fmt_float<T: Real>(x: T) -> String {
    format!("{x:.16e}")
}

pub fn write_study_csv<T: Real, W: Write>(report: &StudyReport<T>, out: &mut W) -> io::Result<()> {
    writeln!(out, "{}", csv_banner())?;
    let mut header: Vec<String> = vec![report.param_name.to_string()];
    header.extend(report.columns.iter().cloned());
    header.extend(report.scalars.iter().map(|(name, _)| name.clone()));
    header.push("n".into());
    header.push("tol".into());
    if report.provenance.eps.is_some() {
        header.push("eps".into());
    }
    writeln!(out, "{}", header.join(","))?;
    for rec in &report.records {
        let mut row: Vec<String> = vec![fmt_float(rec.param)];
        row.extend(rec.values.iter().map(|&v| fmt_float(v)));
        row.extend(report.scalars.iter().map(|&(_, v)| fmt_float(v)));
        row.push(report.provenance.rule_size.to_string());
        row.push(fmt_float(report.provenance.tol));
        if let Some(eps) = report.provenance.eps {
            row.push(fmt_float(eps));
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn study_summary<T: Real>(report: &StudyReport<T>) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "study: {} (swept parameter: {}, {} records)\n",
        report.kind.name(),
        report.param_name,
        report.records.len()
    ));
    if report.kind == crate::studies::StudyKind::MuSweep {
        s.push_str(
            "convention: the kernel and omega are taken to DEcrease with mu, \
             hence sigma = 1/omega increases\n",
        );
    }
    s.push_str(&format!(
        "provenance: n={} tol={:e}{}\n",
        report.provenance.rule_size,
        report.provenance.tol,
        match report.provenance.eps {
            Some(e) => format!(" eps={e:e}"),
            None => String::new(),
        }
    ));
    for (name, v) in &report.scalars {
        s.push_str(&format!("  {name} = {v:e}\n"));
    }
    for f in &report.flags {
        s.push_str(&format!(
            "  flag {:<40} {}\n",
            f.name,
            if f.pass { "PASS" } else { "FAIL" }
        ));
    }
    s
}

pub fn write_solve_csv<T: Real, W: Write>(
    p: &GribovParams<T>,
    frame: KernelFrame,
    n: usize,
    tol: T,
    r: &SpectralResult<T>,
    out: &mut W,
) -> io::Result<()> {
    writeln!(out, "{}", csv_banner())?;
    writeln!(
        out,
        "lambda_prime,mu,lambda,frame,n,tol,omega,sigma,gap,residual,iterations"
    )?;
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{},{}",
        fmt_float(p.lambda_prime()),
        fmt_float(p.mu()),
        fmt_float(p.lambda()),
        frame.name(),
        n,
        fmt_float(tol),
        fmt_float(r.omega),
        fmt_float(r.sigma),
        fmt_float(r.gap),
        fmt_float(r.residual),
        r.iterations
    )?;
    Ok(())
}

pub fn solve_summary<T: Real>(
    p: &GribovParams<T>,
    frame: KernelFrame,
    n: usize,
    r: &SpectralResult<T>,
) -> String {
    let native = match (p.rho_prime(), p.delta()) {
        (Some(rp), Some(d)) => format!(" rho'={rp} rho={} delta={d}", p.rho()),
        _ => format!(" rho={} (limit operator)", p.rho()),
    };
    let mut s = String::new();
    s.push_str(&format!(
        "params: lambda'={} mu={} lambda={}{}{}\n",
        p.lambda_prime(),
        p.mu(),
        p.lambda(),
        native,
        if p.out_of_theory() {
            " [out-of-theory override]"
        } else {
            ""
        }
    ));
    s.push_str(&format!("frame: {}  n: {n}\n", frame.name()));
    s.push_str(&format!(
        "omega (spectral radius of the inverse): {:e}\n",
        r.omega
    ));
    s.push_str(&format!(
        "sigma = 1/omega (smallest eigenvalue):   {:e}\n",
        r.sigma
    ));
    s.push_str(&format!(
        "gap |lambda_2|/omega: {:e}   residual: {:e}   iterations: {}\n",
        r.gap, r.residual, r.iterations
    ));
    s
}

pub fn write_hsnorm_csv<T: Real, W: Write>(
    p: &GribovParams<T>,
    frame: KernelFrame,
    n: usize,
    hs: T,
    out: &mut W,
) -> io::Result<()> {
    writeln!(out, "{}", csv_banner())?;
    writeln!(out, "lambda_prime,mu,lambda,frame,n,hs_norm")?;
    writeln!(
        out,
        "{},{},{},{},{},{}",
        fmt_float(p.lambda_prime()),
        fmt_float(p.mu()),
        fmt_float(p.lambda()),
        frame.name(),
        n,
        fmt_float(hs)
    )?;
    Ok(())
}

/// Row-major dump of the assembled matrix: one row per (i, j) entry with the
/// kernel value (entry divided by the column weight) alongside.
pub fn write_matrix_csv<T: Real, W: Write>(m: &OperatorMatrix<T>, out: &mut W) -> io::Result<()> {
    writeln!(out, "{}", csv_banner())?;
    writeln!(
        out,
        "i,j,y_i,y_j,kernel,entry,lambda_prime,mu,lambda,frame,n"
    )?;
    let n = m.n();
    let p = m.params();
    for i in 0..n {
        for j in 0..n {
            let e = m.entry(i, j);
            let k = e / m.rule().weights()[j];
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                i,
                j,
                fmt_float(m.rule().nodes()[i]),
                fmt_float(m.rule().nodes()[j]),
                fmt_float(k),
                fmt_float(e),
                fmt_float(p.lambda_prime()),
                fmt_float(p.mu()),
                fmt_float(p.lambda()),
                m.frame().name(),
                n
            )?;
        }
    }
    Ok(())
}

pub fn write_verify_csv<W: Write>(report: &VerifyReport, out: &mut W) -> io::Result<()> {
    writeln!(out, "{}", csv_banner())?;
    writeln!(out, "criterion,name,measured,threshold,pass,n,tol,eps")?;
    for o in &report.outcomes {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            o.index,
            o.name,
            fmt_float(o.measured),
            fmt_float(o.threshold),
            u8::from(o.pass),
            report.options.n,
            fmt_float(report.options.tol),
            fmt_float(report.options.eps)
        )?;
    }
    Ok(())
}

pub fn verify_summary(report: &VerifyReport) -> String {
    let mut s = String::new();
    for o in &report.outcomes {
        s.push_str(&format!(
            "criterion {:>2} [{}] {}: measured {:.3e} vs {:.3e}{}\n",
            o.index,
            if o.pass { "PASS" } else { "FAIL" },
            o.name,
            o.measured,
            o.threshold,
            if o.detail.is_empty() {
                String::new()
            } else {
                format!(" ({})", o.detail)
            }
        ));
    }
    s.push_str(&format!(
        "verdict: {}\n",
        if report.all_pass() {
            "ALL CRITERIA PASS"
        } else {
            "CRITERIA FAILED"
        }
    ));
    s
}
