#pragma once

#include <cstddef>
#include <filesystem>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "json.hpp"

#include "balance_nets/error.hpp"

namespace balance_nets::io {

  using Json = nlohmann::json;

  // Lowercase hex SHA-256 of the bytes.
  std::string sha256_hex(std::string_view bytes);

  // Reads a whole file. Throws Error(invalid_input) when it cannot be read.
  std::string read_text(std::filesystem::path const& path);

  struct SourcePosition {
    std::size_t line   = 1;
    std::size_t column = 1;
  };

  // 1-based line and column of a byte offset.
  SourcePosition position_of(std::string_view text, std::size_t offset);

  // A parsed JSON text that can report the source line of any value.
  class Document {
   public:
    // Throws Error(parse) as "source:line:column: message".
    static std::shared_ptr<Document const> parse(std::string text, std::string source);
    static std::shared_ptr<Document const> load(std::filesystem::path const& path);

    Json const& root() const noexcept {
      return _root;
    }

    std::string const& text() const noexcept {
      return _text;
    }

    std::string const& source() const noexcept {
      return _source;
    }

    // Directory that relative paths inside the document resolve against.
    std::filesystem::path const& base() const noexcept {
      return _base;
    }

    // Position of the value at `pointer`, or of its deepest existing
    // ancestor.
    SourcePosition locate(Json::json_pointer const& pointer) const;

    // Throws Error(code) as "source:line:column: /pointer: message".
    [[noreturn]] void fail_at(Json::json_pointer const& pointer,
                              std::string const&        message,
                              ErrorCode                 code = ErrorCode::validation) const;

   private:
    Document() = default;

    std::string           _text;
    std::string           _source;
    std::filesystem::path _base;
    Json                  _root;
  };

  // A value inside a Document together with its JSON pointer. Accessors throw
  // path-anchored Error(validation) on type or range mismatches.
  class Node {
   public:
    explicit Node(std::shared_ptr<Document const> doc);

    Document const& document() const noexcept {
      return *_doc;
    }

    Json const& json() const noexcept {
      return *_value;
    }

    Json::json_pointer const& pointer() const noexcept {
      return _pointer;
    }

    bool is_object() const noexcept {
      return _value->is_object();
    }

    bool is_array() const noexcept {
      return _value->is_array();
    }

    bool is_string() const noexcept {
      return _value->is_string();
    }

    bool is_number() const noexcept {
      return _value->is_number();
    }

    bool contains(std::string const& key) const {
      return _value->is_object() && _value->contains(key);
    }

    Node                at(std::string const& key) const;
    std::optional<Node> find(std::string const& key) const;
    Node                at(std::size_t index) const;
    // Array length; fails when not an array.
    std::size_t size() const;

    std::string   as_string() const;
    double        as_number() const;
    bool          as_bool() const;
    std::size_t   as_size() const;
    std::uint64_t as_uint64() const;

    // Fails on object keys outside `allowed`.
    void allow_keys(std::initializer_list<std::string_view> allowed) const;

    [[noreturn]] void fail(std::string const& message,
                           ErrorCode          code = ErrorCode::validation) const;

    // Runs f and re-anchors any Error it throws at this node.
    template <typename F>
    auto anchored(F&& f) const -> decltype(f()) {
      try {
        return f();
      } catch (Error const& e) {
        fail(e.what(), e.code());
      }
    }

   private:
    Node(std::shared_ptr<Document const> doc, Json const* value, Json::json_pointer pointer);

    std::shared_ptr<Document const> _doc;
    Json const*                     _value;
    Json::json_pointer              _pointer;
  };

}  // namespace balance_nets::io
