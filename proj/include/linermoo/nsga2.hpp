#pragma once

#include <functional>
#include <ostream>

#include "linermoo/population.hpp"
#include "linermoo/util.hpp"
#include "linermoo/variation.hpp"

namespace linermoo {

struct Nsga2Params {
    int pop_size = 100;
    int generations = 500;
    double p_mut = -1;     // -1 selects 1/m, m = gene count
    double eta_mut = 100;  // mutation distribution index
    double cr = 0.5;       // crossover ratio
    double eta_cx = 20;    // crossover distribution index
    std::uint64_t seed = 0;
    int threads = -1;  // -1 reads LINERMOO_THREADS
    std::ostream* progress = nullptr;
    std::function<void(int, const RankedPopulation&)> on_generation;
};

namespace detail {

inline int tournament_pick(Rng& rng, const RankedPopulation& pop) {
    const int n = static_cast<int>(pop.members.size());
    const int a = static_cast<int>(rng.uniform_int(0, n - 1));
    const int b = static_cast<int>(rng.uniform_int(0, n - 1));
    if (pop.rank[a] != pop.rank[b]) return pop.rank[a] < pop.rank[b] ? a : b;
    if (pop.crowding[a] != pop.crowding[b])
        return pop.crowding[a] > pop.crowding[b] ? a : b;
    return std::min(a, b);
}

// (mu + lambda) environmental selection: whole fronts first, the split
// front by descending crowding with the stable combined index breaking ties.
inline std::vector<Member> select_survivors(RankedPopulation combined,
                                            int pop_size) {
    std::vector<Member> next;
    next.reserve(pop_size);
    for (const std::vector<int>& front : combined.fronts) {
        if (static_cast<int>(next.size() + front.size()) <= pop_size) {
            for (int i : front) next.push_back(std::move(combined.members[i]));
            if (static_cast<int>(next.size()) == pop_size) break;
            continue;
        }
        std::vector<int> order = front;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            if (combined.crowding[a] != combined.crowding[b])
                return combined.crowding[a] > combined.crowding[b];
            return a < b;
        });
        for (int i : order) {
            if (static_cast<int>(next.size()) == pop_size) break;
            next.push_back(std::move(combined.members[i]));
        }
        break;
    }
    return next;
}

}  // namespace detail

// Elitist nondominated-sorting GA: binary tournament on (rank, crowding),
// SBX on continuous genes with uniform exchange on integer genes,
// polynomial mutation, box repair, and (mu + lambda) survival.
inline RankedPopulation nsga2_evolve(const Problem& prob, Nsga2Params params) {
    const GeneLayout& lay = prob.layout;
    const int m = lay.size();
    const double p_mut = params.p_mut > 0 ? params.p_mut : 1.0 / m;
    const int threads = params.threads >= 1 ? params.threads : thread_cap();
    Rng rng = sub_stream(params.seed, "nsga2");

    std::vector<Member> init(params.pop_size);
    for (int i = 0; i < params.pop_size; ++i)
        init[i].genotype = repair(prob, random_genotype(prob, rng));
    parallel_for(init.size(), threads, [&](std::size_t i) {
        init[i].solution = decode(prob, init[i].genotype);
    });
    RankedPopulation pop = rank_members(std::move(init));

    if (params.progress) {
        write_progress_header(*params.progress);
        write_progress_line(*params.progress, 0, pop);
    }
    if (params.on_generation) params.on_generation(0, pop);

    for (int gen = 1; gen <= params.generations; ++gen) {
        std::vector<Member> offspring;
        offspring.reserve(params.pop_size);
        while (static_cast<int>(offspring.size()) < params.pop_size) {
            const int pa = detail::tournament_pick(rng, pop);
            const int pb = detail::tournament_pick(rng, pop);
            Genotype c1 = pop.members[pa].genotype;
            Genotype c2 = pop.members[pb].genotype;
            if (rng.uniform01() < params.cr) {
                for (int j = 0; j < m; ++j) {
                    if (lay.is_integer[j]) {
                        if (rng.uniform01() < 0.5)
                            std::swap(c1.genes[j], c2.genes[j]);
                    } else if (rng.uniform01() < 0.5) {
                        sbx_gene(rng, params.eta_cx, c1.genes[j], c2.genes[j]);
                    }
                }
            }
            for (Genotype* child : {&c1, &c2}) {
                for (int j = 0; j < m; ++j) {
                    if (rng.uniform01() >= p_mut) continue;
                    child->genes[j] += polynomial_mutation_delta(
                                           rng, params.eta_mut, child->genes[j],
                                           lay.lower[j], lay.upper[j]) *
                                       (lay.upper[j] - lay.lower[j]);
                }
                *child = repair(prob, std::move(*child));
            }
            offspring.push_back({std::move(c1), {}});
            if (static_cast<int>(offspring.size()) < params.pop_size)
                offspring.push_back({std::move(c2), {}});
        }
        parallel_for(offspring.size(), threads, [&](std::size_t i) {
            offspring[i].solution = decode(prob, offspring[i].genotype);
        });

        std::vector<Member> combined = std::move(pop.members);
        for (Member& c : offspring) combined.push_back(std::move(c));
        RankedPopulation ranked_combined = rank_members(std::move(combined));
        pop = rank_members(
            detail::select_survivors(std::move(ranked_combined),
                                     params.pop_size));

        if (params.progress) write_progress_line(*params.progress, gen, pop);
        if (params.on_generation) params.on_generation(gen, pop);
    }
    return pop;
}

}  // namespace linermoo
