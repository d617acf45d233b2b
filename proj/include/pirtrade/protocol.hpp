#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pirtrade/rational.hpp"

namespace pirtrade {

/// GF(2) sum of message symbols. Symbol id = message * L + position, both
/// zero-based. The empty combo means "store/send nothing".
class XorCombo {
public:
    XorCombo() = default;
    explicit XorCombo(std::size_t universe);
    static XorCombo of(std::size_t universe, std::initializer_list<std::size_t> ids);

    std::size_t universe() const { return universe_; }
    bool empty() const;
    std::size_t weight() const;
    bool contains(std::size_t id) const;
    void toggle(std::size_t id);
    std::vector<std::size_t> symbols() const;

    /// Value of the combo under a full symbol assignment (bit i = symbol i).
    std::uint8_t evaluate(const XorCombo& assignment) const;

    /// Moves symbol i to map(i) inside a universe of size new_universe.
    XorCombo remap(const std::function<std::size_t(std::size_t)>& map, std::size_t new_universe) const;

    XorCombo& operator^=(const XorCombo& o);
    friend XorCombo operator^(XorCombo a, const XorCombo& b) { return a ^= b; }
    friend bool operator==(const XorCombo&, const XorCombo&) = default;
    friend auto operator<=>(const XorCombo& a, const XorCombo& b) {
        return a.words_ <=> b.words_;
    }

private:
    friend class SpanSolver;
    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Renders a combo the way the storage tables read: "a^c", "∅" when empty.
/// Messages are letters while K <= 26; positions are suffixed when L > 1.
std::string render_combo(const XorCombo& c, int messages, int length);

/// What each server stores. Every entry costs one symbol.
struct StorageLayout {
    int messages = 0;
    int length = 1;  // symbols per message, GF(2) alphabet
    std::vector<std::vector<XorCombo>> servers;

    std::size_t universe() const { return static_cast<std::size_t>(messages) * static_cast<std::size_t>(length); }
};

using QueryFn = std::function<XorCombo(int k, std::uint64_t key, int server)>;
using DecodeFn = std::function<std::uint8_t(int k, std::uint64_t key, std::span<const std::uint8_t> answers)>;

/// One independently keyed retrieval: uniform key in [0, key_count), one
/// (possibly empty) combo per server, and a decoder recovering symbol
/// `target_position` of the desired message from the per-server answers.
struct RetrievalComponent {
    std::string name;
    std::uint64_t key_count = 1;
    int target_position = 0;
    QueryFn query;
    DecodeFn decode;
};

/// Query plan. The full key is the independent tuple of component keys, so
/// the full key space is the product of the component key spaces.
struct QueryPlan {
    std::vector<RetrievalComponent> components;
};

/// Answers of all servers for one component under one (k, key).
struct AnswerRecord {
    std::vector<std::uint8_t> symbols;  // 0 where nothing was sent
    std::vector<int> lengths;           // 0 for the empty combo, else 1
};

struct PirProtocol {
    std::string name;
    int servers = 0;
    StorageLayout storage;
    QueryPlan plan;

    int messages() const { return storage.messages; }
    int length() const { return storage.length; }
};

struct CostReport {
    Rational alpha_bar;
    Rational beta_bar;
    std::vector<long> storage_per_server;          // symbols
    std::vector<Rational> download_per_server;     // E[l_n], symbols
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultVerifyBudget = std::uint64_t{1} << 24;

/// N = 2, L = 1. Server 1 stores every message, server 2 stores W_1 ^ W_k.
/// The even-parity member of {X, W_k ^ X} goes to server 2.
PirProtocol build_construction_a(int messages);
/// K = T(N-1), L = 1. Servers 1..N-1 hold one group of T messages each,
/// server N holds the T cross-group parities.
PirProtocol build_construction_b(int servers, int t);
/// Round-robin placement of `base` on M >= base.servers servers; message
/// length grows to M * L. Sub-code m occupies servers m, m+1, ..., m+N-1
/// (mod M, one-based).
PirProtocol cyclic_compose(const PirProtocol& base, int target_servers);

/// Simulated answers: each server computes its answer from its own stored
/// values only. Throws std::logic_error if a query is not computable.
AnswerRecord simulate_answers(const PirProtocol& p, std::size_t component, int k, std::uint64_t key,
                              const XorCombo& assignment);

/// Exhaustive decoding check over every message assignment, key and k.
/// Components are checked separately: a component's answers only involve
/// symbols in its own scope, so enumerating that scope is exhaustive.
bool verify_correctness(const PirProtocol& p, std::uint64_t budget = kDefaultVerifyBudget);

/// True iff for every server the exact query distribution is the same for
/// all k. Checked per component; the full query is the tuple of component
/// queries under independent keys, so equal factors give equal products and
/// vice versa.
bool verify_privacy(const PirProtocol& p, std::uint64_t budget = kDefaultVerifyBudget);

/// Exact normalized costs. Throws std::logic_error if the expected download
/// depends on k.
CostReport measure_costs(const PirProtocol& p, std::uint64_t budget = kDefaultVerifyBudget);

/// Text tables mirroring the storage and retrieval tables: one storage table,
/// then per component and per k the distinct query rows with their exact
/// probabilities.
std::string dump_tables(const PirProtocol& p, std::uint64_t budget = kDefaultVerifyBudget);

}  // namespace pirtrade
