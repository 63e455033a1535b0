//! Report assembly and the two renderings: stable-schema JSON (rationals as
//! exact "p/q" strings) and a per-feature table for terminals.

use std::time::Duration;

use serde::Serialize;
use svaudit::constructions::ConstructionResult;
use svaudit::issues::{detect, Issue, IssueReport};
use svaudit::model::{BooleanFunction, ExplanationProblem, FeatureSet};
use svaudit::search::SurveyResult;
use svaudit::shapley::decimal3;
use svaudit::xplain::explanation_sets;

/// Everything cmd_analyze computes; construct reuses it under --verify.
pub struct Analysis {
    pub report: IssueReport,
    pub axps: Vec<FeatureSet>,
    pub cxps: Vec<FeatureSet>,
}

impl Analysis {
    pub fn run(problem: &ExplanationProblem) -> Analysis {
        let report = detect(problem);
        let sets = explanation_sets(problem);
        Analysis { report, axps: sets.axps, cxps: sets.cxps }
    }
}

/// Tables bigger than this stay out of the JSON (the .btt file is the
/// carrier for big functions).
const JSON_TABLE_CAP: u8 = 8;

#[derive(Serialize)]
pub struct FunctionInfo {
    arity: u8,
    source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    table: Option<String>,
}

impl FunctionInfo {
    fn new(f: &BooleanFunction, source: &str) -> FunctionInfo {
        FunctionInfo {
            arity: f.arity(),
            source: source.to_string(),
            table: (f.arity() <= JSON_TABLE_CAP).then(|| f.table_string()),
        }
    }
}

#[derive(Serialize)]
pub struct InstanceInfo {
    /// Feature 1 is the leftmost character.
    point: String,
    /// The same point as its table index (feature 1 = least significant bit).
    index: u32,
    class: u8,
}

#[derive(Serialize)]
pub struct ConstructionInfo {
    issue: String,
    provenance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    file: Option<String>,
    verified: Option<bool>,
}

#[derive(Serialize)]
pub struct ShapleyInfo {
    exact: Vec<String>,
    decimal: Vec<String>,
}

#[derive(Serialize)]
pub struct IssuesInfo {
    i1: bool,
    i2: bool,
    i3: bool,
    i4: bool,
    i5: bool,
}

#[derive(Serialize)]
pub struct WitnessesInfo {
    i1: Option<u8>,
    i2: Option<(u8, u8)>,
    i3: Option<u8>,
    i4: Option<(u8, u8)>,
    i5: Option<u8>,
}

#[derive(Serialize)]
pub struct TimingInfo {
    milliseconds: f64,
}

impl TimingInfo {
    fn new(elapsed: Duration) -> TimingInfo {
        TimingInfo { milliseconds: elapsed.as_secs_f64() * 1e3 }
    }
}

#[derive(Serialize)]
pub struct Report {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    construction: Option<ConstructionInfo>,
    function: FunctionInfo,
    instance: InstanceInfo,
    shapley: Option<ShapleyInfo>,
    axps: Option<Vec<Vec<u8>>>,
    cxps: Option<Vec<Vec<u8>>>,
    relevancy: Option<Vec<&'static str>>,
    issues: Option<IssuesInfo>,
    witnesses: Option<WitnessesInfo>,
    timing: TimingInfo,
}

fn family(sets: &[FeatureSet]) -> Vec<Vec<u8>> {
    sets.iter().map(|s| s.iter().collect()).collect()
}

fn fill_analysis(report: &mut Report, analysis: &Analysis) {
    let ir = &analysis.report;
    report.shapley = Some(ShapleyInfo {
        exact: ir.shapley.iter().map(|r| r.to_string()).collect(),
        decimal: ir.shapley.iter().map(decimal3).collect(),
    });
    report.axps = Some(family(&analysis.axps));
    report.cxps = Some(family(&analysis.cxps));
    report.relevancy = Some(ir.relevancy.iter().map(|r| r.as_str()).collect());
    report.issues = Some(IssuesInfo {
        i1: ir.i1.is_some(),
        i2: ir.i2.is_some(),
        i3: ir.i3.is_some(),
        i4: ir.i4.is_some(),
        i5: ir.i5.is_some(),
    });
    report.witnesses =
        Some(WitnessesInfo { i1: ir.i1, i2: ir.i2, i3: ir.i3, i4: ir.i4, i5: ir.i5 });
}

fn base_report(
    command: &'static str,
    problem: &ExplanationProblem,
    source: &str,
    elapsed: Duration,
) -> Report {
    Report {
        command,
        construction: None,
        function: FunctionInfo::new(problem.function(), source),
        instance: InstanceInfo {
            point: problem.instance().point.to_string(),
            index: problem.v_index(),
            class: problem.class() as u8,
        },
        shapley: None,
        axps: None,
        cxps: None,
        relevancy: None,
        issues: None,
        witnesses: None,
        timing: TimingInfo::new(elapsed),
    }
}

pub fn analyze_report(
    source: &str,
    problem: &ExplanationProblem,
    analysis: &Analysis,
    elapsed: Duration,
) -> Report {
    let mut report = base_report("analyze", problem, source, elapsed);
    fill_analysis(&mut report, analysis);
    report
}

pub fn construct_report(
    built: &ConstructionResult,
    file: Option<String>,
    analysis: Option<&Analysis>,
    elapsed: Duration,
) -> Report {
    let problem = built.problem().expect("constructed instances are consistent");
    let mut report = base_report("construct", &problem, "constructed", elapsed);
    report.construction = Some(ConstructionInfo {
        issue: built.target_issue.as_str().to_string(),
        provenance: built.provenance.clone(),
        file,
        verified: analysis.map(|_| true),
    });
    if let Some(a) = analysis {
        fill_analysis(&mut report, a);
    }
    report
}

#[derive(Serialize)]
pub struct CountsInfo {
    i1: u64,
    i2: u64,
    i3: u64,
    i4: u64,
    i5: u64,
}

impl CountsInfo {
    fn new(counts: [u64; 5]) -> CountsInfo {
        CountsInfo {
            i1: counts[0],
            i2: counts[1],
            i3: counts[2],
            i4: counts[3],
            i5: counts[4],
        }
    }
}

#[derive(Serialize)]
pub struct SurveyReport {
    command: &'static str,
    m: u8,
    mode: &'static str,
    sample: Option<u64>,
    seed: Option<u64>,
    functions_scanned: u64,
    function_counts: CountsInfo,
    pair_counts: CountsInfo,
    timing: TimingInfo,
}

pub fn survey_report(result: &SurveyResult, sample: Option<u64>, seed: u64) -> SurveyReport {
    SurveyReport {
        command: "survey",
        m: result.m,
        mode: if sample.is_some() { "sampled" } else { "exhaustive" },
        sample,
        seed: sample.is_some().then_some(seed),
        functions_scanned: result.functions_scanned,
        function_counts: CountsInfo::new(result.function_counts.as_array()),
        pair_counts: CountsInfo::new(result.pair_counts.as_array()),
        timing: TimingInfo::new(result.elapsed),
    }
}

#[derive(Serialize)]
pub struct BoundReport {
    pub command: &'static str,
    pub issue: String,
    pub n: u32,
    pub bound: String,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports contain no non-string keys")
}

// ---------------------------------------------------------------------------
// table rendering
// ---------------------------------------------------------------------------

/// Issues whose witness mentions feature i, as compact marks for the table.
fn marks(ir: &IssueReport, i: u8) -> String {
    let mut out: Vec<&str> = Vec::new();
    if ir.i1 == Some(i) {
        out.push("I1");
    }
    if let Some((a, b)) = ir.i2 {
        if a == i || b == i {
            out.push("I2");
        }
    }
    if ir.i3 == Some(i) {
        out.push("I3");
    }
    if let Some((a, b)) = ir.i4 {
        if a == i || b == i {
            out.push("I4");
        }
    }
    if ir.i5 == Some(i) {
        out.push("I5");
    }
    out.join(" ")
}

fn family_line(label: &str, sets: &[FeatureSet]) -> String {
    if sets.is_empty() {
        return format!("{label}: (none)");
    }
    let rendered: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
    format!("{label}: {}", rendered.join(" "))
}

fn witness_lines(ir: &IssueReport) -> Vec<String> {
    let sv = |i: u8| ir.shapley[i as usize - 1].clone();
    let mut out = Vec::new();
    if let Some(i) = ir.i1 {
        out.push(format!("I1: irrelevant feature {i} has Sv = {}", sv(i)));
    }
    if let Some((a, b)) = ir.i2 {
        out.push(format!(
            "I2: irrelevant feature {a} outranks relevant feature {b} (|{}| > |{}|)",
            sv(a),
            sv(b)
        ));
    }
    if let Some(i) = ir.i3 {
        out.push(format!("I3: relevant feature {i} has Sv = 0"));
    }
    if let Some((a, b)) = ir.i4 {
        out.push(format!("I4: both I1 (feature {a}) and I3 (feature {b}) at one instance"));
    }
    if let Some(i) = ir.i5 {
        out.push(format!("I5: the strict top-|Sv| feature {i} is irrelevant"));
    }
    if out.is_empty() {
        out.push("none".to_string());
    }
    out
}

/// The human rendering: function/instance header, one row per feature, the
/// explanation families, then each fired issue with its witness.
pub fn render_table(
    source: &str,
    problem: &ExplanationProblem,
    analysis: &Analysis,
    quiet: bool,
) -> String {
    use std::fmt::Write;

    let mut out = String::new();
    let f = problem.function();
    let n = f.arity();
    writeln!(out, "function: {source} ({n} features, {} table entries)", f.table_len()).unwrap();
    writeln!(
        out,
        "instance: v = {} (table index {}), class {}",
        problem.instance().point,
        problem.v_index(),
        problem.class() as u8
    )
    .unwrap();
    let ir = &analysis.report;
    if !quiet {
        let exact: Vec<String> = ir.shapley.iter().map(|r| r.to_string()).collect();
        let wide = exact.iter().map(String::len).max().unwrap_or(2).max("Sv exact".len());
        writeln!(out).unwrap();
        writeln!(out, "feature  {:>wide$}  {:>8}  {:<11} issues", "Sv exact", "Sv", "label").unwrap();
        for i in 1..=n {
            let k = i as usize - 1;
            writeln!(
                out,
                "{i:>7}  {:>wide$}  {:>8}  {:<11} {}",
                exact[k],
                decimal3(&ir.shapley[k]),
                ir.relevancy[k].as_str(),
                marks(ir, i)
            )
            .unwrap();
        }
        writeln!(out).unwrap();
    }
    writeln!(out, "{}", family_line("AXp's", &analysis.axps)).unwrap();
    writeln!(out, "{}", family_line("CXp's", &analysis.cxps)).unwrap();
    let mut lines = witness_lines(ir).into_iter();
    writeln!(out, "issues: {}", lines.next().unwrap()).unwrap();
    for line in lines {
        writeln!(out, "        {line}").unwrap();
    }
    out
}

pub fn render_survey_table(result: &SurveyResult, sample: Option<u64>, seed: u64) -> String {
    use std::fmt::Write;

    let mut out = String::new();
    let mode = match sample {
        Some(k) => format!("sampled {k} tables (seed {seed})"),
        None => "exhaustive".to_string(),
    };
    writeln!(
        out,
        "survey: m = {}, {mode}, {} functions scanned in {:.1} ms",
        result.m,
        result.functions_scanned,
        result.elapsed.as_secs_f64() * 1e3
    )
    .unwrap();
    writeln!(out).unwrap();
    writeln!(out, "issue  functions      pairs").unwrap();
    let f = result.function_counts.as_array();
    let p = result.pair_counts.as_array();
    for issue in Issue::ALL {
        let k = issue.index();
        writeln!(out, "{:>5}  {:>9}  {:>9}", issue.to_string(), f[k], p[k]).unwrap();
    }
    out
}
