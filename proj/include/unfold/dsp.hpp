#pragma once
// Additive Deligne-Simpson problems at desk scale: solving sum_a mu_a = 0 on
// products of (deformed) truncated orbits, and continuation in the parameters c.

#include <stdexcept>
#include <string>
#include <vector>

#include "unfold/orbit.hpp"
#include "unfold/spectral.hpp"

namespace unfold {

/// One pole of a connection on P^1: A(z) contains sum_nu coeffs[nu] (z - point)^{-nu-1}.
struct ConnectionPole {
    Complex point;
    std::vector<Mat<Complex>> coeffs;
};

struct ConnectionOnP1 {
    int n = 0;
    std::vector<ConnectionPole> poles;
    /// Optional record of the parameter path (one entry per continuation step).
    std::vector<std::vector<std::vector<QQi>>> path;

    Mat<Complex> residue_sum() const;
    Mat<Complex> eval(Complex z) const;
    /// All coefficient matrices, the input of the irreducibility test.
    std::vector<Mat<Complex>> all_coeffs() const;
};

struct DSPPoint {
    QQi t;                // base point
    CanonicalForm form;   // sorted canonical form
    std::vector<QQi> c;   // deformation parameters; empty means c = 0
};

struct DSPOptions {
    double tol = 1e-10;
    int max_iter = 200;
    int restarts = 16;
    double stall_ratio = 0.5;  // an accepted step counts as slow above this reduction ratio
    int stall_steps = 12;      // consecutive slow steps before a restart
    unsigned seed = 1;
    double irr_tol = 1e-8;
    double init_scale = 0.5;
};

struct DSPInstance {
    std::vector<DSPPoint> points;
    DSPOptions opt;

    int n() const { return points.empty() ? 0 : points.front().form.n; }
    SpectralCollection collection() const;
    /// Throws std::invalid_argument on unsorted forms, mixed n, repeated base points or bad c lengths.
    void validate() const;
};

struct DSPSolution {
    std::vector<TriangularCoords<Complex>> coords;
    ConnectionOnP1 conn;
    double residual = 0;
    int iterations = 0;
    int restarts_used = 0;
    std::vector<double> history;  // residual after each accepted step
};

struct NoConvergence : std::runtime_error {
    int iterations;
    double best_residual;
    NoConvergence(int it, double best, const std::string& where = "")
        : std::runtime_error("no convergence" + where + " after " + std::to_string(it) +
                             " iterations, best residual " + std::to_string(best)),
          iterations(it), best_residual(best) {}
};
struct FuchsViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ReducibleSolution : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PathLeftBH : std::runtime_error {
    int step;
    explicit PathLeftBH(int s) : std::runtime_error("path leaves B_H at step " + std::to_string(s)), step(s) {}
};

/// Burnside: the matrices generate M_n as an algebra (numeric rank against tol * scale).
bool is_irreducible(const std::vector<Mat<Complex>>& mats, double tol = 1e-8);
/// Exact variant.
bool is_irreducible(const std::vector<Mat<QQi>>& mats);

/// Total trace of the residues vanishes.
bool fuchs_check(const std::vector<CanonicalForm>& forms);
bool fuchs_check(const DSPInstance& inst);

/// Total moment sum_a mu_a at the given coordinates.
Mat<Complex> total_moment(const DSPInstance& inst, const std::vector<TriangularCoords<Complex>>& coords);

/// Assembles A(z)dz from evaluated orbit points, one pole per distinct t_a + c_i.
ConnectionOnP1 assemble_connection(const DSPInstance& inst, const std::vector<TriangularCoords<Complex>>& coords);

DSPSolution solve_dsp(const DSPInstance& inst);

/// Re-solves at fixed c starting from the given coordinates (the corrector).
DSPSolution correct(const DSPInstance& inst, std::vector<TriangularCoords<Complex>> start);

struct ContinuationStep {
    QQi s;
    double residual = 0;
    int iterations = 0;
};

struct ContinuationResult {
    DSPSolution solution;        // at the target
    DSPInstance target;          // instance with c = c*
    std::vector<ContinuationStep> steps;
    std::vector<ConnectionOnP1> samples;
    SpectralCollection endpoint_types;   // per-pole spectral types of the unfolded collection
    SpectralCollection expected_types;   // unfold_spectral of the instance types on the endpoint strata
    FiberReport fiber;                   // numerical per-pole check at the target
    int rigidity_start = 0, rigidity_end = 0;
    bool ok = false;
};

/// Path c(s) = phi(s) c* with phi(s) = s + i detour s(1-s), sampled at s = i/steps (halved on
/// corrector failure) with exact B_H checks at each sample. detour = 0 is the straight segment;
/// a nonzero detour leaves the real line, where straight segments can cross the complement of B_H.
ContinuationResult continue_family(const DSPInstance& inst, const DSPSolution& sol,
                                   const std::vector<std::vector<QQi>>& target_c, int steps = 16,
                                   const QQi& detour = QQi(0));

struct VerifyReport {
    bool residue_sum = false, irreducible = false, spectral = false;
    double residue_error = 0, spectral_error = 0;
    std::vector<std::string> failures;
    bool ok() const { return residue_sum && irreducible && spectral; }
};

/// Checks A against the unfolded forms H_a(c_a) placed at t_a.
VerifyReport verify_solution(const ConnectionOnP1& conn, const DSPInstance& inst, double tol = 1e-8);

}  // namespace unfold
