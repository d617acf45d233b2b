#include "pirtrade/protocol.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <sstream>

namespace pirtrade {

// ---------------------------------------------------------------- XorCombo

XorCombo::XorCombo(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

XorCombo XorCombo::of(std::size_t universe, std::initializer_list<std::size_t> ids) {
    XorCombo c(universe);
    for (auto id : ids) c.toggle(id);
    return c;
}

bool XorCombo::empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t XorCombo::weight() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

bool XorCombo::contains(std::size_t id) const {
    if (id >= universe_) return false;
    return (words_[id / 64] >> (id % 64)) & 1U;
}

void XorCombo::toggle(std::size_t id) {
    if (id >= universe_) throw std::out_of_range("XorCombo: symbol outside universe");
    words_[id / 64] ^= std::uint64_t{1} << (id % 64);
}

std::vector<std::size_t> XorCombo::symbols() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t bits = words_[w];
        while (bits) {
            out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
            bits &= bits - 1;
        }
    }
    return out;
}

std::uint8_t XorCombo::evaluate(const XorCombo& assignment) const {
    if (assignment.universe_ != universe_) throw std::invalid_argument("XorCombo: universe mismatch");
    unsigned parity = 0;
    for (std::size_t w = 0; w < words_.size(); ++w)
        parity ^= static_cast<unsigned>(std::popcount(words_[w] & assignment.words_[w]));
    return static_cast<std::uint8_t>(parity & 1U);
}

XorCombo XorCombo::remap(const std::function<std::size_t(std::size_t)>& map, std::size_t new_universe) const {
    XorCombo out(new_universe);
    for (auto id : symbols()) out.toggle(map(id));
    return out;
}

XorCombo& XorCombo::operator^=(const XorCombo& o) {
    if (o.universe_ != universe_) throw std::invalid_argument("XorCombo: universe mismatch");
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    return *this;
}

std::string render_combo(const XorCombo& c, int messages, int length) {
    if (c.empty()) return "∅";
    std::string out;
    for (auto id : c.symbols()) {
        const auto k = static_cast<int>(id) / length;
        const auto pos = static_cast<int>(id) % length;
        if (!out.empty()) out += '^';
        if (messages <= 26)
            out += static_cast<char>('a' + k);
        else
            out += "W" + std::to_string(k + 1) + (length > 1 ? "." : "");
        if (length > 1) out += std::to_string(pos + 1);
    }
    return out;
}

// -------------------------------------------------------------- SpanSolver

/// Expresses a combo as a GF(2) sum of one server's stored entries.
class SpanSolver {
public:
    explicit SpanSolver(const std::vector<XorCombo>& stored) {
        for (std::size_t i = 0; i < stored.size(); ++i) {
            XorCombo v = stored[i];
            XorCombo used(stored.size());
            used.toggle(i);
            reduce(v, used);
            if (v.empty()) continue;
            basis_.push_back({lowest(v), std::move(v), std::move(used)});
        }
        universe_ = stored.empty() ? 0 : stored.front().universe();
        entries_ = stored.size();
    }

    /// Indices of stored entries whose XOR equals `target`, or nullopt.
    std::optional<std::vector<std::size_t>> express(const XorCombo& target) const {
        if (target.empty()) return std::vector<std::size_t>{};
        if (entries_ == 0) return std::nullopt;
        XorCombo v = target;
        XorCombo used(entries_);
        reduce(v, used);
        if (!v.empty()) return std::nullopt;
        return used.symbols();
    }

private:
    struct Row {
        std::size_t pivot;
        XorCombo vec;
        XorCombo used;
    };

    static std::size_t lowest(const XorCombo& v) {
        for (std::size_t w = 0; w < v.words_.size(); ++w)
            if (v.words_[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(v.words_[w]));
        return v.universe();
    }

    void reduce(XorCombo& v, XorCombo& used) const {
        for (const auto& row : basis_) {
            if (v.contains(row.pivot)) {
                v ^= row.vec;
                used ^= row.used;
            }
        }
    }

    std::vector<Row> basis_;
    std::size_t universe_ = 0;
    std::size_t entries_ = 0;
};

// ------------------------------------------------------------ constructions

PirProtocol build_construction_a(int messages) {
    if (messages < 1) throw std::invalid_argument("construction A needs K >= 1");
    if (messages > 30) throw std::invalid_argument("construction A: K > 30 has an unenumerable key space");
    const auto universe = static_cast<std::size_t>(messages);

    PirProtocol p;
    p.name = "A(K=" + std::to_string(messages) + ")";
    p.servers = 2;
    p.storage.messages = messages;
    p.storage.length = 1;
    p.storage.servers.resize(2);
    for (int k = 0; k < messages; ++k) p.storage.servers[0].push_back(XorCombo::of(universe, {std::size_t(k)}));
    for (int k = 1; k < messages; ++k) p.storage.servers[1].push_back(XorCombo::of(universe, {0, std::size_t(k)}));

    RetrievalComponent c;
    c.name = "A";
    c.key_count = std::uint64_t{1} << messages;
    c.target_position = 0;
    c.query = [universe](int k, std::uint64_t v, int server) {
        XorCombo x(universe);
        for (std::size_t j = 0; j < universe; ++j)
            if ((v >> j) & 1U) x.toggle(j);
        XorCombo y = x;
        y.toggle(static_cast<std::size_t>(k));
        const bool x_even = x.weight() % 2 == 0;
        const XorCombo& even = x_even ? x : y;
        const XorCombo& odd = x_even ? y : x;
        return server == 1 ? even : odd;
    };
    c.decode = [](int, std::uint64_t, std::span<const std::uint8_t> answers) {
        return static_cast<std::uint8_t>(answers[0] ^ answers[1]);
    };
    p.plan.components.push_back(std::move(c));
    return p;
}

PirProtocol build_construction_b(int servers, int t) {
    if (servers < 2) throw std::invalid_argument("construction B needs N >= 2");
    if (t < 1) throw std::invalid_argument("construction B needs T >= 1");
    if (t > 30) throw std::invalid_argument("construction B: T > 30 has an unenumerable key space");
    const int messages = t * (servers - 1);
    const auto universe = static_cast<std::size_t>(messages);
    const int groups = servers - 1;
    auto id = [t](int group, int pos) { return static_cast<std::size_t>(t * group + pos); };

    PirProtocol p;
    p.name = "B(N=" + std::to_string(servers) + ",T=" + std::to_string(t) + ")";
    p.servers = servers;
    p.storage.messages = messages;
    p.storage.length = 1;
    p.storage.servers.resize(static_cast<std::size_t>(servers));
    for (int g = 0; g < groups; ++g)
        for (int i = 0; i < t; ++i) p.storage.servers[g].push_back(XorCombo::of(universe, {id(g, i)}));
    for (int i = 0; i < t; ++i) {
        XorCombo parity(universe);
        for (int g = 0; g < groups; ++g) parity.toggle(id(g, i));
        p.storage.servers[groups].push_back(parity);
    }

    RetrievalComponent c;
    c.name = "B";
    c.key_count = std::uint64_t{1} << t;
    c.target_position = 0;
    c.query = [=](int k, std::uint64_t v, int server) {
        const int target_group = k / t;
        const int target_pos = k % t;
        const std::uint64_t flipped = v ^ (std::uint64_t{1} << target_pos);
        XorCombo q(universe);
        if (server < groups) {
            const std::uint64_t mask = server == target_group ? v : flipped;
            for (int i = 0; i < t; ++i)
                if ((mask >> i) & 1U) q.toggle(id(server, i));
        } else {
            for (int i = 0; i < t; ++i)
                if ((flipped >> i) & 1U)
                    for (int g = 0; g < groups; ++g) q.toggle(id(g, i));
        }
        return q;
    };
    c.decode = [](int, std::uint64_t, std::span<const std::uint8_t> answers) {
        std::uint8_t acc = 0;
        for (auto a : answers) acc ^= a;
        return acc;
    };
    p.plan.components.push_back(std::move(c));
    return p;
}

PirProtocol cyclic_compose(const PirProtocol& base, int target_servers) {
    const int n = base.servers;
    const int m_count = target_servers;
    if (m_count < n) throw std::invalid_argument("cyclic_compose: M must be >= base N");
    const int k_count = base.messages();
    const int base_len = base.length();
    const int new_len = base_len * m_count;
    const std::size_t new_universe = static_cast<std::size_t>(k_count) * static_cast<std::size_t>(new_len);

    // Base symbol (k, pos) of sub-message m -> (k, m * L + pos).
    auto symbol_map = [=](int m) {
        return [=](std::size_t id) {
            const auto k = id / static_cast<std::size_t>(base_len);
            const auto pos = id % static_cast<std::size_t>(base_len);
            return k * static_cast<std::size_t>(new_len) + static_cast<std::size_t>(m * base_len) + pos;
        };
    };

    PirProtocol p;
    p.name = "cyclic(" + base.name + ",M=" + std::to_string(m_count) + ")";
    p.servers = m_count;
    p.storage.messages = k_count;
    p.storage.length = new_len;
    p.storage.servers.resize(static_cast<std::size_t>(m_count));
    for (int s = 0; s < m_count; ++s) {
        for (int m = 0; m < m_count; ++m) {
            const int base_server = ((s - m) % m_count + m_count) % m_count;
            if (base_server >= n) continue;
            for (const auto& entry : base.storage.servers[base_server])
                p.storage.servers[s].push_back(entry.remap(symbol_map(m), new_universe));
        }
    }

    for (int m = 0; m < m_count; ++m) {
        for (const auto& bc : base.plan.components) {
            RetrievalComponent c;
            c.name = "sub" + std::to_string(m + 1) + "/" + bc.name;
            c.key_count = bc.key_count;
            c.target_position = m * base_len + bc.target_position;
            c.query = [=, query = bc.query, map = symbol_map(m)](int k, std::uint64_t key, int server) {
                const int base_server = ((server - m) % m_count + m_count) % m_count;
                if (base_server >= n) return XorCombo(new_universe);
                return query(k, key, base_server).remap(map, new_universe);
            };
            c.decode = [=, decode = bc.decode](int k, std::uint64_t key, std::span<const std::uint8_t> answers) {
                std::vector<std::uint8_t> local(static_cast<std::size_t>(n));
                for (int b = 0; b < n; ++b) local[b] = answers[static_cast<std::size_t>((m + b) % m_count)];
                return decode(k, key, local);
            };
            p.plan.components.push_back(std::move(c));
        }
    }
    return p;
}

// ------------------------------------------------------------ verification

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
    return a * b;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) { return b > UINT64_MAX - a ? UINT64_MAX : a + b; }

void charge(std::uint64_t& total, std::uint64_t amount, std::uint64_t budget, const std::string& what) {
    total = saturating_add(total, amount);
    if (total > budget)
        throw BudgetExceeded(what + ": enumeration size exceeds budget of " + std::to_string(budget));
}

// queries[k][key][server]
using QueryTable = std::vector<std::vector<std::vector<XorCombo>>>;

QueryTable materialize(const PirProtocol& p, const RetrievalComponent& c) {
    QueryTable table(static_cast<std::size_t>(p.messages()));
    for (int k = 0; k < p.messages(); ++k) {
        auto& per_key = table[static_cast<std::size_t>(k)];
        per_key.resize(c.key_count);
        for (std::uint64_t key = 0; key < c.key_count; ++key) {
            auto& row = per_key[key];
            row.reserve(static_cast<std::size_t>(p.servers));
            for (int s = 0; s < p.servers; ++s) row.push_back(c.query(k, key, s));
        }
    }
    return table;
}

std::uint64_t table_cost(const PirProtocol& p, const RetrievalComponent& c) {
    return saturating_mul(saturating_mul(c.key_count, static_cast<std::uint64_t>(p.messages())),
                          static_cast<std::uint64_t>(p.servers));
}

std::vector<std::uint8_t> stored_values(const std::vector<XorCombo>& stored, const XorCombo& assignment) {
    std::vector<std::uint8_t> out;
    out.reserve(stored.size());
    for (const auto& e : stored) out.push_back(e.evaluate(assignment));
    return out;
}

}  // namespace

AnswerRecord simulate_answers(const PirProtocol& p, std::size_t component, int k, std::uint64_t key,
                              const XorCombo& assignment) {
    const auto& c = p.plan.components.at(component);
    AnswerRecord rec;
    for (int s = 0; s < p.servers; ++s) {
        const auto& stored = p.storage.servers[static_cast<std::size_t>(s)];
        const XorCombo q = c.query(k, key, s);
        const auto rep = SpanSolver(stored).express(q);
        if (!rep) throw std::logic_error("server " + std::to_string(s + 1) + " cannot compute " +
                                         render_combo(q, p.messages(), p.length()));
        const auto values = stored_values(stored, assignment);
        std::uint8_t a = 0;
        for (auto i : *rep) a ^= values[i];
        rec.symbols.push_back(a);
        rec.lengths.push_back(q.empty() ? 0 : 1);
    }
    return rec;
}

bool verify_correctness(const PirProtocol& p, std::uint64_t budget) {
    const int k_count = p.messages();
    const int len = p.length();
    const std::size_t universe = p.storage.universe();

    // Every symbol position of W_k is recovered by exactly one component.
    std::vector<int> cover(static_cast<std::size_t>(len), 0);
    for (const auto& c : p.plan.components) {
        if (c.target_position < 0 || c.target_position >= len) return false;
        ++cover[static_cast<std::size_t>(c.target_position)];
    }
    if (std::any_of(cover.begin(), cover.end(), [](int n) { return n != 1; })) return false;

    std::vector<SpanSolver> solvers;
    for (const auto& stored : p.storage.servers) solvers.emplace_back(stored);

    // Pass 1: size everything up before doing any work.
    std::uint64_t total = 0;
    std::vector<QueryTable> tables;
    std::vector<std::vector<std::size_t>> scopes;
    for (const auto& c : p.plan.components) {
        charge(total, table_cost(p, c), budget, "verify_correctness");
        tables.push_back(materialize(p, c));
        XorCombo scope(universe);
        for (int k = 0; k < k_count; ++k) {
            const auto target = static_cast<std::size_t>(k) * static_cast<std::size_t>(len) +
                                static_cast<std::size_t>(c.target_position);
            if (!scope.contains(target)) scope.toggle(target);
            for (const auto& row : tables.back()[static_cast<std::size_t>(k)])
                for (const auto& q : row)
                    for (auto id : q.symbols())
                        if (!scope.contains(id)) scope.toggle(id);
        }
        scopes.push_back(scope.symbols());
        if (scopes.back().size() >= 63) throw BudgetExceeded("verify_correctness: component scope too wide");
        charge(total,
               saturating_mul(std::uint64_t{1} << scopes.back().size(),
                              saturating_mul(c.key_count, static_cast<std::uint64_t>(k_count))),
               budget, "verify_correctness");
    }

    for (std::size_t ci = 0; ci < p.plan.components.size(); ++ci) {
        const auto& c = p.plan.components[ci];
        const auto& table = tables[ci];
        const auto& scope = scopes[ci];

        // Each server's answer to each query, as stored-entry indices.
        std::vector<std::vector<std::vector<std::vector<std::size_t>>>> reps(static_cast<std::size_t>(k_count));
        for (int k = 0; k < k_count; ++k) {
            auto& per_key = reps[static_cast<std::size_t>(k)];
            per_key.resize(c.key_count);
            for (std::uint64_t key = 0; key < c.key_count; ++key) {
                for (int s = 0; s < p.servers; ++s) {
                    auto rep = solvers[static_cast<std::size_t>(s)].express(
                        table[static_cast<std::size_t>(k)][key][static_cast<std::size_t>(s)]);
                    if (!rep) return false;
                    per_key[key].push_back(std::move(*rep));
                }
            }
        }

        std::vector<std::uint8_t> answers(static_cast<std::size_t>(p.servers));
        const std::uint64_t assignments = std::uint64_t{1} << scope.size();
        for (std::uint64_t bits = 0; bits < assignments; ++bits) {
            XorCombo assignment(universe);
            for (std::size_t i = 0; i < scope.size(); ++i)
                if ((bits >> i) & 1U) assignment.toggle(scope[i]);
            std::vector<std::vector<std::uint8_t>> values;
            for (const auto& stored : p.storage.servers) values.push_back(stored_values(stored, assignment));

            for (int k = 0; k < k_count; ++k) {
                const auto target = static_cast<std::size_t>(k) * static_cast<std::size_t>(len) +
                                    static_cast<std::size_t>(c.target_position);
                const std::uint8_t want = assignment.contains(target) ? 1 : 0;
                for (std::uint64_t key = 0; key < c.key_count; ++key) {
                    const auto& rep = reps[static_cast<std::size_t>(k)][key];
                    for (int s = 0; s < p.servers; ++s) {
                        std::uint8_t a = 0;
                        for (auto i : rep[static_cast<std::size_t>(s)]) a ^= values[static_cast<std::size_t>(s)][i];
                        answers[static_cast<std::size_t>(s)] = a;
                    }
                    if (c.decode(k, key, answers) != want) return false;
                }
            }
        }
    }
    return true;
}

bool verify_privacy(const PirProtocol& p, std::uint64_t budget) {
    std::uint64_t total = 0;
    for (const auto& c : p.plan.components) charge(total, table_cost(p, c), budget, "verify_privacy");

    for (const auto& c : p.plan.components) {
        const auto table = materialize(p, c);
        for (int s = 0; s < p.servers; ++s) {
            std::map<XorCombo, std::uint64_t> reference;
            for (int k = 0; k < p.messages(); ++k) {
                std::map<XorCombo, std::uint64_t> dist;
                for (std::uint64_t key = 0; key < c.key_count; ++key)
                    ++dist[table[static_cast<std::size_t>(k)][key][static_cast<std::size_t>(s)]];
                if (k == 0)
                    reference = std::move(dist);
                else if (dist != reference)
                    return false;
            }
        }
    }
    return true;
}

CostReport measure_costs(const PirProtocol& p, std::uint64_t budget) {
    std::uint64_t total = 0;
    for (const auto& c : p.plan.components) charge(total, table_cost(p, c), budget, "measure_costs");

    const Rational norm(static_cast<long>(p.servers) * p.length());
    CostReport report;
    long stored = 0;
    for (const auto& s : p.storage.servers) {
        report.storage_per_server.push_back(static_cast<long>(s.size()));
        stored += static_cast<long>(s.size());
    }
    report.alpha_bar = Rational(stored) / norm;

    // Linearity of expectation over independent component keys.
    std::vector<Rational> reference;
    for (int k = 0; k < p.messages(); ++k) {
        std::vector<Rational> per_server(static_cast<std::size_t>(p.servers), Rational(0));
        for (const auto& c : p.plan.components) {
            for (int s = 0; s < p.servers; ++s) {
                std::uint64_t sent = 0;
                for (std::uint64_t key = 0; key < c.key_count; ++key)
                    if (!c.query(k, key, s).empty()) ++sent;
                per_server[static_cast<std::size_t>(s)] +=
                    Rational(mpz_class(std::to_string(sent)), mpz_class(std::to_string(c.key_count)));
            }
        }
        if (k == 0) {
            reference = per_server;
        } else {
            Rational a = 0, b = 0;
            for (const auto& r : reference) a += r;
            for (const auto& r : per_server) b += r;
            if (a != b)
                throw std::logic_error("measure_costs: expected download differs between k=1 and k=" +
                                       std::to_string(k + 1));
        }
    }
    Rational download = 0;
    for (const auto& r : reference) download += r;
    report.download_per_server = std::move(reference);
    report.beta_bar = download / norm;
    return report;
}

std::string dump_tables(const PirProtocol& p, std::uint64_t budget) {
    std::uint64_t total = 0;
    for (const auto& c : p.plan.components) charge(total, table_cost(p, c), budget, "dump_tables");

    const int k_count = p.messages();
    const int len = p.length();
    auto cell = [&](const XorCombo& c) { return render_combo(c, k_count, len); };
    auto pad = [](const std::string& s, std::size_t width) {
        // The empty-set glyph is 3 bytes but one column.
        std::size_t shown = s.size();
        if (s.find("∅") != std::string::npos) shown -= 2;
        return s + std::string(width > shown ? width - shown : 0, ' ');
    };

    std::ostringstream out;
    out << "protocol " << p.name << "  N=" << p.servers << " K=" << k_count << " L=" << len << "\n\n";

    std::size_t rows = 0;
    for (const auto& s : p.storage.servers) rows = std::max(rows, s.size());
    std::vector<std::vector<std::string>> storage_cells(rows, std::vector<std::string>(static_cast<std::size_t>(p.servers)));
    std::size_t width = 3;
    for (int s = 0; s < p.servers; ++s) {
        const auto& col = p.storage.servers[static_cast<std::size_t>(s)];
        for (std::size_t r = 0; r < rows; ++r) {
            storage_cells[r][static_cast<std::size_t>(s)] = r < col.size() ? cell(col[r]) : "∅";
            width = std::max(width, storage_cells[r][static_cast<std::size_t>(s)].size());
        }
    }
    out << "storage\n|";
    for (int s = 0; s < p.servers; ++s) out << ' ' << pad("S" + std::to_string(s + 1), width) << " |";
    out << '\n';
    for (const auto& row : storage_cells) {
        out << '|';
        for (const auto& c : row) out << ' ' << pad(c, width) << " |";
        out << '\n';
    }

    for (const auto& c : p.plan.components) {
        const auto table = materialize(p, c);
        for (int k = 0; k < k_count; ++k) {
            // Distinct query rows in first-seen key order with their counts.
            std::vector<std::pair<std::vector<XorCombo>, std::uint64_t>> distinct;
            for (std::uint64_t key = 0; key < c.key_count; ++key) {
                const auto& row = table[static_cast<std::size_t>(k)][key];
                auto it = std::find_if(distinct.begin(), distinct.end(), [&](const auto& d) { return d.first == row; });
                if (it == distinct.end())
                    distinct.emplace_back(row, 1);
                else
                    ++it->second;
            }
            std::size_t w = 3;
            for (const auto& d : distinct)
                for (const auto& q : d.first) w = std::max(w, cell(q).size());
            out << "\nretrieve W" << (k + 1) << " [" << c.name << ", keys=" << c.key_count << "]\n| prob. |";
            for (int s = 0; s < p.servers; ++s) out << ' ' << pad("server " + std::to_string(s + 1), w) << " |";
            out << '\n';
            for (const auto& d : distinct) {
                const Rational prob(mpz_class(std::to_string(d.second)), mpz_class(std::to_string(c.key_count)));
                out << "| " << pad(prob.str(), 5) << " |";
                for (const auto& q : d.first) out << ' ' << pad(cell(q), std::max<std::size_t>(w, 8)) << " |";
                out << '\n';
            }
        }
    }
    return out.str();
}

}  // namespace pirtrade
