#ifndef GHOM_CONFIG_HPP
#define GHOM_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ghom/field.hpp"
#include "ghom/grid.hpp"

namespace ghom {

/// Locale-independent shortest round-trip formatting; infinities render as
/// the literals "inf" / "-inf".
std::string format_double(double v);
std::string format_int(std::int64_t v);

/// Keyed-text run configuration: `key=value` lines, `#` comments, strict key
/// set.  Values are stored as canonical strings; resolve() fills defaults,
/// validates every entry and rejects unknown or duplicate keys, after which
/// the typed getters may be used.  serialize() emits the manifest: re-parsing
/// it resolves to the identical configuration byte for byte.
class RunConfig {
  public:
    /// Parse `key=value` text into the raw store.  Later calls layer on top
    /// of earlier ones (command-line overrides), but a duplicate within one
    /// text is an error.
    void load_text(const std::string& text, const std::string& origin);
    void load_file(const std::string& path);

    /// One `key=value` override (the --set flag).  Unlike file entries,
    /// repeated overrides of one key simply replace each other.
    void set(const std::string& key, const std::string& value);

    /// Fill defaults, canonicalize and validate every value.
    void resolve();

    bool resolved() const { return resolved_; }

    const std::string& raw(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::int64_t get_int(const std::string& key) const;
    double get_double(const std::string& key) const;
    /// Exactly grid.dimension components.
    Vec get_vec(const std::string& key) const;
    std::vector<double> get_list(const std::string& key) const;
    std::vector<Vec> get_vec_list(const std::string& key) const;

    int dimension() const;

    /// Manifest text: header comment, then every key in schema order.
    std::string serialize(const std::string& command) const;

    /// Vector field described by the field.* keys.
    VectorFieldSpec make_field() const;

    /// Uniform grid.resolution^dimension lattice.
    TorusGrid make_grid() const;

    /// All keys accepted by the schema, in manifest order.
    static std::vector<std::string> schema_keys();

  private:
    std::map<std::string, std::string> store_;
    bool resolved_ = false;
};

}  // namespace ghom

#endif
