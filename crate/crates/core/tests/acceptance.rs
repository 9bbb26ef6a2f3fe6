//! One line per acceptance criterion. A criterion may print FAIL when the
//! failure is a documented discrepancy in the printed reference (the
//! records involved are `archived`); the process exits nonzero only for
//! other failures.

use std::process::Command;
use std::time::Instant;
use supergas::report::Status;
use supergas::salg::orbit_checks;
use supergas::solutions::{is_corrected, nonstandard_checks, verify_families};
use supergas::verify::{self, Record, DEFAULT_MODES};

struct Line {
    pass: bool,
    documented: bool,
    summary: String,
}

impl Line {
    fn of(pass: bool, summary: impl Into<String>) -> Line {
        Line {
            pass,
            documented: false,
            summary: summary.into(),
        }
    }
}

fn none_failed(r: &[Record]) -> bool {
    r.iter().all(|x| x.status == Status::Pass)
}

fn failing(r: &[Record]) -> Vec<&str> {
    r.iter().filter(|x| x.status != Status::Pass).map(|x| x.check.as_str()).collect()
}

fn operators() -> Line {
    let n = 120;
    let r = verify::operators(n).expect("operator suite runs");
    Line::of(none_failed(&r), format!("ten operator relations on {n} random superfields: {}", r[0].detail[0]))
}

fn table() -> Line {
    let r = verify::table().expect("table builds");
    Line::of(none_failed(&r), format!("{}; two paths: {}", r[0].detail[0], r[1].detail[0]))
}

fn prolongation() -> Line {
    let r = verify::prolongation().expect("listings load");
    let first_order = r.iter().filter(|x| x.anchor != "second-order prolongation coefficient").all(|x| x.status == Status::Pass);
    let archived: Vec<String> = r
        .iter()
        .filter(|x| x.status == Status::Archived)
        .map(|x| format!("{} ({} terms)", x.check, x.detail.len()))
        .collect();
    let sym = verify::symmetries(&DEFAULT_MODES[..1]).expect("symmetry check runs");
    Line::of(
        first_order && none_failed(&sym),
        format!(
            "first-order coefficients and total derivatives exact; diff report archived for {}",
            if archived.is_empty() { "none".into() } else { archived.join(", ") }
        ),
    )
}

fn symmetries() -> Line {
    let r = verify::symmetries(&DEFAULT_MODES).expect("symmetry checks run");
    let controls = r.iter().filter(|x| x.anchor == "negative control").count();
    Line::of(
        none_failed(&r),
        format!("{} checks over gamma symbolic, 2, 3, 4 ({} negative controls); failing: {:?}", r.len(), controls, failing(&r)),
    )
}

fn classification() -> Line {
    let r = verify::classification().expect("classification runs");
    let orbits = orbit_checks().expect("orbits compute");
    let undocumented = r.iter().any(|x| x.status == Status::Fail);
    let mismatched: Vec<&str> = orbits.iter().filter(|o| !(o.exact() || o.same_subalgebra())).map(|o| o.name).collect();
    let rest_ok = r.iter().filter(|x| !x.check.contains("orbit")).all(|x| x.status == Status::Pass);
    let pass = mismatched.is_empty() && rest_ok && !undocumented;
    Line {
        pass,
        documented: !pass && !undocumented && rest_ok,
        summary: format!(
            "cocycle, 24-entry catalog and block decomposition ok: {rest_ok}; orbit closed forms not reproduced: {mismatched:?} (engine gives twice the printed odd correction)"
        ),
    }
}

fn reductions() -> Line {
    let r = verify::reductions().expect("reductions run");
    let red: Vec<&Record> = r.iter().filter(|x| x.check.starts_with("reductions/")).collect();
    let archived: Vec<&str> = red.iter().filter(|x| x.status == Status::Archived).map(|x| x.check.as_str()).collect();
    let fail: Vec<&str> = r.iter().filter(|x| x.status == Status::Fail).map(|x| x.check.as_str()).collect();
    Line::of(
        fail.is_empty() && red.len() == 8,
        format!("{} reduced systems, archived diffs within the handful: {archived:?}; failing: {fail:?}", red.len()),
    )
}

fn solutions() -> Line {
    let fams = verify_families().expect("families load");
    let printed: Vec<_> = fams.iter().filter(|f| !is_corrected(&f.id)).collect();
    let solving = printed.iter().filter(|f| f.solves()).count();
    let not_solving: Vec<&str> = printed.iter().filter(|f| !f.solves()).map(|f| f.id.as_str()).collect();
    let undocumented = fams.iter().any(|f| f.status() == Status::Fail);
    let table3 = nonstandard_checks().expect("nonstandard invariants load");
    let table3_ok = table3.len() == 6 && table3.iter().all(|c| c.ok());
    let pass = not_solving.is_empty() && table3_ok && printed.len() >= 14 && !undocumented;
    Line {
        pass,
        documented: !pass && !undocumented && table3_ok,
        summary: format!(
            "{solving}/{} printed families solve; not solving (recorded defects): {not_solving:?}; nonstandard invariants 6/6: {table3_ok}",
            printed.len()
        ),
    }
}

fn kernel() -> Line {
    let r = verify::core(verify::KERNEL_CASES).expect("kernel properties run");
    let props: Vec<&Record> = r.iter().filter(|x| !x.check.contains("round trip")).collect();
    Line::of(
        props.iter().all(|x| x.status == Status::Pass) && props.len() == 5,
        format!("{} properties on {} cases each; failing: {:?}", props.len(), verify::KERNEL_CASES, failing(&r)),
    )
}

fn cli() -> Line {
    let bin = env!("CARGO_BIN_EXE_supergas");
    let trip = verify::core(verify::KERNEL_CASES).expect("round trip runs");
    let trip_ok = trip.iter().filter(|x| x.check.contains("round trip")).all(|x| x.status == Status::Pass);
    let all = Command::new(bin).args(["verify", "all"]).output().expect("binary runs");
    let guard = Command::new(bin).args(["verify", "symmetries", "--gamma", "-1"]).output().expect("binary runs");
    let guard_msg = String::from_utf8_lossy(&guard.stderr);
    let guard_ok = !guard.status.success() && guard_msg.contains("gamma+1");
    Line::of(
        trip_ok && all.status.success() && guard_ok,
        format!("round trip: {trip_ok}; verify all exit {:?}; gamma=-1 guard: {guard_ok}", all.status.code()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Line); 9] = [
        ("operator algebra", operators),
        ("supercommutator table", table),
        ("prolongation fixtures", prolongation),
        ("symmetry verification", symmetries),
        ("classification", classification),
        ("reductions", reductions),
        ("solutions", solutions),
        ("kernel properties", kernel),
        ("command line", cli),
    ];
    let mut undocumented = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let line = f();
        let verdict = match (line.pass, line.documented) {
            (true, _) => "PASS",
            (false, true) => "FAIL (documented)",
            (false, false) => {
                undocumented += 1;
                "FAIL"
            }
        };
        println!("criterion {} {name}: {verdict} - {} [{} ms]", i + 1, line.summary, start.elapsed().as_millis());
    }
    if undocumented > 0 {
        std::process::exit(1);
    }
}
