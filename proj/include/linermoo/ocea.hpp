#pragma once

#include <functional>
#include <ostream>

#include "linermoo/population.hpp"
#include "linermoo/util.hpp"
#include "linermoo/variation.hpp"

namespace linermoo {

struct SolgenParams {
    double de_scale = 1.0;  // C
    double cr = 0.5;        // crossover ratio
    double p_mut = 0.01;    // per-gene mutation probability
    double rho = 20;        // mutation distribution index
};

// Differential-evolution step against two distinct parents from the mating
// pool, box repair, polynomial mutation, final repair.
inline Genotype solgen(const Problem& prob, const Genotype& s,
                       const std::vector<const Genotype*>& mating_pool,
                       const SolgenParams& params, Rng& rng) {
    if (mating_pool.size() < 2)
        throw std::invalid_argument("solgen needs a mating pool of size >= 2");
    const int m = prob.layout.size();
    const int n = static_cast<int>(mating_pool.size());
    const int i1 = static_cast<int>(rng.uniform_int(0, n - 1));
    int i2 = static_cast<int>(rng.uniform_int(0, n - 2));
    if (i2 >= i1) ++i2;
    const Genotype& p1 = *mating_pool[i1];
    const Genotype& p2 = *mating_pool[i2];

    Genotype t = s;
    for (int j = 0; j < m; ++j) {
        if (rng.uniform01() <= params.cr)
            t.genes[j] =
                s.genes[j] + params.de_scale * (p1.genes[j] - p2.genes[j]);
    }
    t = repair(prob, std::move(t));
    for (int j = 0; j < m; ++j) {
        if (rng.uniform01() > params.p_mut) continue;
        t.genes[j] += polynomial_mutation_delta(
                          rng, params.rho, t.genes[j], prob.layout.lower[j],
                          prob.layout.upper[j]) *
                      (prob.layout.upper[j] - prob.layout.lower[j]);
    }
    return repair(prob, std::move(t));
}

// Online cluster over archive slots: running-mean centroid in genotype
// space, counter equals the slot count.
struct Cluster {
    std::vector<double> centroid;
    int counter = 0;
    std::vector<int> slots;
};

// Fixed-capacity external archive. Updates replace exactly one slot (or
// reject the newcomer), so capacity never changes after initialization.
struct Archive {
    std::vector<Member> entries;
    std::vector<int> cluster_of;  // cluster index per slot
    std::vector<Cluster> clusters;
};

struct EsocEvent {
    int generation = 0;
    int fronts = 0;          // I of the combined set
    bool kept_new = false;   // newcomer survived (s* was an archive member)
    int cluster_count = 0;   // after the update
    int archive_size = 0;    // after the update
    bool hv_checked = false; // single-front case with diagnostics enabled
    double hv_pre = 0;
    double hv_post = 0;
    Point2 ref = {0, 0};
};

namespace detail {

inline double centroid_distance(const Cluster& a, const Cluster& b) {
    double s = 0;
    for (std::size_t j = 0; j < a.centroid.size(); ++j) {
        const double d = a.centroid[j] - b.centroid[j];
        s += d * d;
    }
    return s;
}

inline void erase_cluster(Archive& archive, int idx) {
    archive.clusters.erase(archive.clusters.begin() + idx);
    for (int& c : archive.cluster_of)
        if (c > idx) --c;
}

inline void merge_clusters_down(Archive& archive, int max_clusters) {
    while (static_cast<int>(archive.clusters.size()) > max_clusters) {
        int best_a = 0, best_b = 1;
        double best = std::numeric_limits<double>::infinity();
        const int n = static_cast<int>(archive.clusters.size());
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                const double d =
                    centroid_distance(archive.clusters[a], archive.clusters[b]);
                if (d < best) {
                    best = d;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        Cluster& keep = archive.clusters[best_a];
        Cluster& gone = archive.clusters[best_b];
        const double total = keep.counter + gone.counter;
        for (std::size_t j = 0; j < keep.centroid.size(); ++j)
            keep.centroid[j] = (keep.centroid[j] * keep.counter +
                                gone.centroid[j] * gone.counter) /
                               total;
        keep.counter += gone.counter;
        for (int slot : gone.slots) {
            keep.slots.push_back(slot);
            archive.cluster_of[slot] = best_a;
        }
        erase_cluster(archive, best_b);
    }
}

}  // namespace detail

// One archive update: sort the combined set into fronts; with several
// fronts drop the worst-front member dominated by the most others, with a
// single front drop the member contributing least hypervolume (reference:
// the combined front's nadir scaled by 1.1, frozen for this update). When
// the newcomer survives, its victim's cluster shrinks (running mean), the
// newcomer seeds a fresh cluster, and the two nearest centroids merge until
// the cluster cap holds.
inline EsocEvent esoc_update(Archive& archive, Member t, int max_clusters,
                             bool hv_diagnostics = false) {
    EsocEvent ev;
    const int k = static_cast<int>(archive.entries.size());
    std::vector<ObjPoint> pts;
    pts.reserve(k + 1);
    for (const Member& e : archive.entries) pts.push_back(obj_point(e.solution));
    pts.push_back(obj_point(t.solution));

    const std::vector<std::vector<int>> fronts = fast_nondominated_sort(pts);
    ev.fronts = static_cast<int>(fronts.size());

    int victim = -1;
    if (ev.fronts > 1) {
        const std::vector<int>& worst = fronts.back();
        int best_count = -1;
        for (int i : worst) {
            int count = 0;
            for (int j = 0; j <= k; ++j)
                if (constrained_dominates(pts[j], pts[i])) ++count;
            if (count > best_count) {
                best_count = count;
                victim = i;
            }
        }
    } else {
        std::vector<Point2> front_pts;
        front_pts.reserve(k + 1);
        for (const ObjPoint& p : pts) front_pts.push_back({p.f1, p.f2});
        const Point2 ref = scaled_nadir_ref(front_pts);
        ev.ref = ref;
        const double full = hv_union(front_pts, ref);
        double best_contrib = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= k; ++i) {
            std::vector<Point2> rest;
            rest.reserve(k);
            for (int j = 0; j <= k; ++j)
                if (j != i) rest.push_back(front_pts[j]);
            const double contrib = full - hv_union(rest, ref);
            if (contrib < best_contrib) {
                best_contrib = contrib;
                victim = i;
            }
        }
        if (hv_diagnostics) {
            ev.hv_checked = true;
            front_pts.pop_back();  // archive members only
            ev.hv_pre = hv_union(front_pts, ref);
        }
    }

    if (victim != k) {
        ev.kept_new = true;
        const int slot = victim;
        const int c = archive.cluster_of[slot];
        Cluster& cl = archive.clusters[c];
        cl.slots.erase(std::find(cl.slots.begin(), cl.slots.end(), slot));
        if (cl.slots.empty()) {
            detail::erase_cluster(archive, c);
        } else {
            cl.counter -= 1;
            const std::vector<double>& gone =
                archive.entries[slot].genotype.genes;
            for (std::size_t j = 0; j < cl.centroid.size(); ++j)
                cl.centroid[j] -= (gone[j] - cl.centroid[j]) / cl.counter;
        }
        archive.entries[slot] = std::move(t);
        Cluster fresh;
        fresh.centroid = archive.entries[slot].genotype.genes;
        fresh.counter = 1;
        fresh.slots = {slot};
        archive.clusters.push_back(std::move(fresh));
        archive.cluster_of[slot] = static_cast<int>(archive.clusters.size()) - 1;
        detail::merge_clusters_down(archive, max_clusters);
    }

    if (ev.hv_checked) {
        std::vector<Point2> post;
        post.reserve(k);
        for (const Member& e : archive.entries)
            post.push_back({e.solution.f1_usd, e.solution.f2_hours});
        ev.hv_post = hv_union(post, ev.ref);
    }
    ev.cluster_count = static_cast<int>(archive.clusters.size());
    ev.archive_size = static_cast<int>(archive.entries.size());
    return ev;
}

struct OceaParams {
    int archive_size = 100;  // K, also the population size
    double alpha = 0.6;      // mating restriction probability
    int max_clusters = 3;    // N_max
    double de_scale = 1.0;   // C
    double cr = 0.5;
    double p_mut = -1;  // -1 selects 1/m
    double rho = 20;
    int generations = 500;
    std::uint64_t seed = 0;
    int threads = -1;
    std::ostream* progress = nullptr;
    std::function<void(const EsocEvent&)> on_update;
};

// OCEA main loop. Mating pools and the global pool are drawn from the
// clustering as it stood at the start of the generation; the archive and
// its live clustering are updated after every child, strictly in order.
inline Archive run_ocea(const Problem& prob, OceaParams params) {
    const int k = params.archive_size;
    const double p_mut =
        params.p_mut > 0 ? params.p_mut : 1.0 / prob.layout.size();
    const SolgenParams sg{params.de_scale, params.cr, p_mut, params.rho};
    const int threads = params.threads >= 1 ? params.threads : thread_cap();
    Rng rng = sub_stream(params.seed, "ocea");

    Archive archive;
    archive.entries.resize(k);
    for (int i = 0; i < k; ++i)
        archive.entries[i].genotype = repair(prob, random_genotype(prob, rng));
    parallel_for(archive.entries.size(), threads, [&](std::size_t i) {
        archive.entries[i].solution =
            decode(prob, archive.entries[i].genotype);
    });
    archive.cluster_of.resize(k);
    for (int i = 0; i < k; ++i) {
        Cluster c;
        c.centroid = archive.entries[i].genotype.genes;
        c.counter = 1;
        c.slots = {i};
        archive.clusters.push_back(std::move(c));
        archive.cluster_of[i] = i;
    }

    auto emit_progress = [&](int gen) {
        if (!params.progress) return;
        std::vector<ObjPoint> pts;
        pts.reserve(archive.entries.size());
        for (const Member& e : archive.entries)
            pts.push_back(obj_point(e.solution));
        write_progress_line(*params.progress, gen, pts);
    };
    if (params.progress) write_progress_header(*params.progress);
    emit_progress(0);

    for (int gen = 1; gen <= params.generations; ++gen) {
        // generation-start snapshot of population and clustering
        std::vector<Genotype> snapshot(k);
        for (int i = 0; i < k; ++i)
            snapshot[i] = archive.entries[i].genotype;
        std::vector<std::vector<int>> groups;
        groups.reserve(archive.clusters.size());
        for (const Cluster& c : archive.clusters) groups.push_back(c.slots);
        std::vector<int> group_of(k, 0);
        for (std::size_t g = 0; g < groups.size(); ++g)
            for (int slot : groups[g]) group_of[slot] = static_cast<int>(g);

        std::vector<const Genotype*> global_pool;
        global_pool.reserve(groups.size());
        for (const std::vector<int>& g : groups) {
            const int pick = static_cast<int>(
                rng.uniform_int(0, static_cast<std::int64_t>(g.size()) - 1));
            global_pool.push_back(&snapshot[g[pick]]);
        }

        for (int j = 0; j < k; ++j) {
            std::vector<const Genotype*> pool;
            if (rng.uniform01() < params.alpha) {
                for (int slot : groups[group_of[j]])
                    if (slot != j) pool.push_back(&snapshot[slot]);
            } else {
                pool = global_pool;
            }
            if (pool.size() < 2) pool = global_pool;
            if (pool.size() < 2) {
                pool.clear();
                for (int slot = 0; slot < k; ++slot)
                    if (slot != j) pool.push_back(&snapshot[slot]);
            }
            Member child;
            child.genotype = solgen(prob, snapshot[j], pool, sg, rng);
            child.solution = decode(prob, child.genotype);
            EsocEvent ev =
                esoc_update(archive, std::move(child), params.max_clusters,
                            static_cast<bool>(params.on_update));
            if (params.on_update) {
                ev.generation = gen;
                params.on_update(ev);
            }
        }
        emit_progress(gen);
    }
    return archive;
}

}  // namespace linermoo
