#ifndef GATSORT_TESTS_SUPPORT_H
#define GATSORT_TESTS_SUPPORT_H

// Fixture paths and brute-force oracles that read model tables directly.

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "gatsort/io.h"
#include "gatsort/kernel.h"
#include "gatsort/parser.h"

namespace testing_support {

inline std::filesystem::path corpus() { return GATSORT_CORPUS_DIR; }

inline gatsort::CheckedTheory theory_of(const std::string& text) {
	return gatsort::check_theory(gatsort::parse_theory(text), {});
}

inline nlohmann::json raw(const std::string& file) { return gatsort::load_json(corpus() / file); }

// Every function from a list of size `n` into a list of size `m`, as index vectors.
inline std::vector<std::vector<std::size_t>> all_functions(std::size_t n, std::size_t m) {
	std::vector<std::vector<std::size_t>> out;
	std::vector<std::size_t> f(n, 0);
	if (n > 0 && m == 0) {
		return out;
	}
	while (true) {
		out.push_back(f);
		std::size_t k = 0;
		while (k < n && ++f[k] == m) {
			f[k] = 0;
			++k;
		}
		if (k == n) {
			return out;
		}
	}
}

// Homomorphisms of transitive graphs: a vertex map plus, for each pair of vertices, a
// map of edges, commuting with composition.
inline std::size_t count_graph_homs(const nlohmann::json& g, const nlohmann::json& h) {
	std::vector<std::string> gv = g["sorts"]["V"];
	std::vector<std::string> hv = h["sorts"]["V"];
	auto edges = [](const nlohmann::json& m, const std::string& a, const std::string& b) {
		return m["sorts"]["E"][a + "," + b].get<std::vector<std::string>>();
	};
	std::size_t count = 0;
	for (const auto& fv : all_functions(gv.size(), hv.size())) {
		// Edges of g with their endpoints, and the target edge lists they may go to.
		struct Edge {
			std::string a, b, e;
			std::vector<std::string> targets;
		};
		std::vector<Edge> es;
		auto image = [&](const std::string& v) {
			for (std::size_t i = 0; i < gv.size(); ++i) {
				if (gv[i] == v) {
					return hv[fv[i]];
				}
			}
			return std::string();
		};
		for (const auto& a : gv) {
			for (const auto& b : gv) {
				for (const auto& e : edges(g, a, b)) {
					es.push_back({a, b, e, edges(h, image(a), image(b))});
				}
			}
		}
		std::vector<std::size_t> pick(es.size(), 0);
		bool possible = std::all_of(es.begin(), es.end(), [](const Edge& e) { return !e.targets.empty(); });
		while (possible) {
			auto map_edge = [&](const std::string& a, const std::string& b, const std::string& e) {
				for (std::size_t k = 0; k < es.size(); ++k) {
					if (es[k].a == a && es[k].b == b && es[k].e == e) {
						return es[k].targets[pick[k]];
					}
				}
				return std::string();
			};
			bool ok = true;
			for (const auto& v1 : gv) {
				for (const auto& v2 : gv) {
					for (const auto& v3 : gv) {
						for (const auto& e1 : edges(g, v1, v2)) {
							for (const auto& e2 : edges(g, v2, v3)) {
								std::string composite = g["ops"]["T"][v1][v2][v3][e1][e2];
								std::string lhs = map_edge(v1, v3, composite);
								std::string rhs = h["ops"]["T"][image(v1)][image(v2)][image(v3)]
								                   [map_edge(v1, v2, e1)][map_edge(v2, v3, e2)];
								ok = ok && lhs == rhs;
							}
						}
					}
				}
			}
			count += ok;
			std::size_t k = 0;
			while (k < es.size() && ++pick[k] == es[k].targets.size()) {
				pick[k] = 0;
				++k;
			}
			if (k == es.size()) {
				break;
			}
		}
	}
	return count;
}

// Monoid homomorphisms between models given as JSON tables.
inline std::size_t count_monoid_homs(const nlohmann::json& m, const nlohmann::json& n) {
	std::vector<std::string> ms = m["sorts"]["M"];
	std::vector<std::string> ns = n["sorts"]["M"];
	std::size_t count = 0;
	for (const auto& f : all_functions(ms.size(), ns.size())) {
		auto image = [&](const std::string& x) {
			return ns[f[static_cast<std::size_t>(std::find(ms.begin(), ms.end(), x) - ms.begin())]];
		};
		bool ok = image(m["ops"]["e"]) == n["ops"]["e"].get<std::string>();
		for (const auto& x : ms) {
			for (const auto& y : ms) {
				ok = ok && image(m["ops"]["mul"][x][y]) == n["ops"]["mul"][image(x)][image(y)].get<std::string>();
			}
		}
		count += ok;
	}
	return count;
}

} // namespace testing_support

#endif
