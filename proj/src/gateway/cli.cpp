#include <psytest/cli.hpp>
#include <psytest/error.hpp>
#include <psytest/executor.hpp>
#include <psytest/generator.hpp>
#include <psytest/service.hpp>
#include <psytest/session_log.hpp>
#include <psytest/statistics.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <httplib.h>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>

namespace psytest::gateway {

namespace fs = std::filesystem;

namespace {

fs::path data_dir()
{
    const char *env = std::getenv("PSYTEST_DATA_DIR");
    return env && *env ? fs::path(env) : fs::path(".");
}

fs::path default_log()
{
    return data_dir() / "psytest.sessions.ndjson";
}

/// A test argument may be a path, or a name looked up under the data directory.
fs::path resolve_test(const std::string &arg)
{
    const fs::path direct(arg);
    if (fs::exists(direct))
        return direct;
    for (const fs::path &candidate : {data_dir() / arg, data_dir() / (arg + ".ptest.json")})
        if (fs::exists(candidate))
            return candidate;
    return direct;
}

std::vector<std::string> split_list(const std::string &text)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = text.find(',', start);
        out.push_back(text.substr(start, comma - start));
        if (comma == std::string::npos)
            return out;
        start = comma + 1;
    }
}

std::vector<Decimal> parse_decimals(const std::string &text)
{
    std::vector<Decimal> out;
    for (const auto &part : split_list(text))
        out.push_back(Decimal::parse(part));
    return out;
}

TestDefinition load_draft(const fs::path &path)
{
    return parse_test(read_file(path), Validation::skip).test;
}

void save_draft(const fs::path &path, const TestDefinition &test)
{
    write_file(path, serialize_test(TestDocument{TestDocument::current_format_version, test}, Validation::skip));
}

CategoryId resolve_category(const TestDefinition &test, const std::string &key)
{
    if (const Category *c = test.find_category(CategoryId{key}))
        return c->id;
    if (const Category *c = test.find_category_by_name(key))
        return c->id;
    throw Error(ErrorCode::unknown_category, fmt::format("no category with id or name '{}'", key));
}

std::string random_session_id()
{
    std::mt19937_64 rng{std::random_device{}()};
    return fmt::format("{:016x}{:016x}", rng(), rng());
}

struct Io {
    std::istream &in;
    std::ostream &out;
    std::ostream &err;
};

struct Interrupted {};

std::string read_line(Io &io)
{
    std::string line;
    if (!std::getline(io.in, line))
        throw Interrupted{};
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    return line;
}

std::optional<std::int64_t> parse_integer(std::string_view text)
{
    while (!text.empty() && text.front() == ' ')
        text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ')
        text.remove_suffix(1);
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || p != text.data() + text.size())
        return std::nullopt;
    return v;
}

DemographicValue prompt_demographic(Io &io, const DemographicField &field)
{
    for (;;) {
        switch (field.kind) {
        case DemographicKind::text:
            io.out << field.name << ": " << std::flush;
            if (auto line = read_line(io); !line.empty())
                return line;
            io.out << "Please enter a value.\n";
            break;
        case DemographicKind::integer:
            io.out << field.name << " (number): " << std::flush;
            if (auto v = parse_integer(read_line(io)))
                return *v;
            io.out << "Please enter a whole number.\n";
            break;
        case DemographicKind::choice: {
            io.out << field.name << ":\n";
            for (std::size_t i = 0; i < field.choices.size(); ++i)
                io.out << "  " << i + 1 << ") " << field.choices[i] << '\n';
            io.out << "> " << std::flush;
            const std::string line = read_line(io);
            if (auto v = parse_integer(line); v && *v >= 1 && *v <= static_cast<std::int64_t>(field.choices.size()))
                return field.choices[static_cast<std::size_t>(*v - 1)];
            if (std::find(field.choices.begin(), field.choices.end(), line) != field.choices.end())
                return line;
            io.out << "Please choose one of the listed options.\n";
            break;
        }
        }
    }
}

std::size_t prompt_answer(Io &io, const Item &item, const TestDefinition &test)
{
    const auto k = static_cast<std::int64_t>(test.answer_set.size());
    io.out << '\n' << item.ordinal << '/' << test.items.size() << ". " << item.text << '\n';
    for (std::size_t i = 0; i < test.answer_set.size(); ++i)
        io.out << "  " << i + 1 << ") " << test.answer_set.options[i] << '\n';
    for (;;) {
        io.out << "> " << std::flush;
        if (auto v = parse_integer(read_line(io)); v && *v >= 1 && *v <= k)
            return static_cast<std::size_t>(*v - 1);
        io.out << "Please enter a number between 1 and " << k << ".\n";
    }
}

struct RunOptions {
    std::string test;
    std::string log;
    std::string session_id;
    bool show_interpretation = false;
};

int cmd_run(Io &io, const RunOptions &opts)
{
    const TestDefinition test = parse_test(read_file(resolve_test(opts.test))).test;
    SessionLog log(opts.log.empty() ? default_log() : fs::path(opts.log));

    io.out << test.title << "\n\n";
    if (!test.instruction.empty())
        io.out << test.instruction << "\n\n";
    try {
        Session session = open_session(test, SessionId{opts.session_id.empty() ? random_session_id() : opts.session_id},
                                       now_utc());
        Demographics demographics;
        for (const auto &field : test.demographics)
            demographics.emplace(field.name, prompt_demographic(io, field));
        session = record_demographics(std::move(session), test, std::move(demographics));

        while (auto item = current_item(session, test))
            session = submit_answer(std::move(session), test, prompt_answer(io, *item, test), now_utc());

        const SessionResult result = score_session(session, test);
        log.append(session, result);
        io.out << "\nThank you. Your answers have been recorded.\n";
        if (opts.show_interpretation) {
            io.out << "\nInterpretation\n";
            for (const auto &r : result.categories)
                io.out << test.find_category(r.category_id)->name << ": " << r.interpretation << '\n';
        }
        return exit_ok;
    } catch (const Interrupted &) {
        io.err << "\nsession interrupted; nothing was recorded\n";
        return exit_interrupted;
    }
}

struct StatsOptions {
    std::string test;
    std::string log;
    std::string format = "csv";
    std::string what = "matrix";
    std::string output;
};

std::vector<SessionRecord> records_for(Io &io, const TestDefinition &test, const StatsOptions &opts)
{
    const SessionLog log(opts.log.empty() ? default_log() : fs::path(opts.log));
    LoadedLog loaded = log.read(LoadMode::lenient);
    for (const auto &issue : loaded.issues)
        io.err << fmt::format("warning: {} line {} skipped: {}\n", log.path().string(), issue.line, issue.message);
    std::erase_if(loaded.records, [&](const SessionRecord &r) { return r.session.test_id != test.test_id; });
    return std::move(loaded.records);
}

int cmd_stats_summary(Io &io, const StatsOptions &opts)
{
    const TestDefinition test = parse_test(read_file(resolve_test(opts.test))).test;
    const auto records = records_for(io, test, opts);
    const auto report = aggregate(records, test);
    if (!report) {
        io.out << "no sessions\n";
        return exit_ok;
    }
    io.out << fmt::format("{} session(s) of '{}'\n", report->sessions, test.title);
    io.out << "standard deviation: population (divides by n)\n\n";
    for (const auto &stats : report->categories) {
        const auto bands = test.bands_for(stats.category_id);
        io.out << fmt::format("{}\n  n={} mean={} std_dev={} min={} max={}\n", test.find_category(stats.category_id)->name,
                              stats.n, stats.mean, stats.std_dev, stats.min.to_string(), stats.max.to_string());
        for (std::size_t i = 0; i < stats.band_histogram.size(); ++i)
            io.out << fmt::format("  band {} {}{}, {}]: {}\n", i + 1, i == 0 ? "[" : "(", bands[i].lower.to_string(),
                                  bands[i].upper.to_string(), stats.band_histogram[i]);
    }
    io.out << '\n';
    for (const auto &item : report->items)
        io.out << fmt::format("item {}: {}\n", item.ordinal, fmt::join(item.answer_frequencies, " "));
    return exit_ok;
}

int cmd_stats_export(Io &io, const StatsOptions &opts)
{
    if (opts.format != "csv")
        throw Error(ErrorCode::malformed_request, fmt::format("unsupported export format '{}'", opts.format));
    const TestDefinition test = parse_test(read_file(resolve_test(opts.test))).test;
    const auto records = records_for(io, test, opts);
    if (records.empty())
        io.err << "no sessions\n";
    const std::string csv =
        opts.what == "summary" ? export_summary_csv(aggregate(records, test), test) : export_matrix_csv(records, test);
    if (opts.output.empty())
        io.out << csv;
    else
        write_file(opts.output, csv);
    return exit_ok;
}

struct ServeOptions {
    std::string config;
    std::string host;
    int port = 0;
    std::string tests_dir;
    std::string log;
    bool reveal_results = false;
    int idle_timeout = 0;
};

int cmd_serve(Io &io, const ServeOptions &opts)
{
    ServiceConfig config;
    config.tests_dir = data_dir();
    config.session_log = default_log();
    if (!opts.config.empty())
        config = parse_service_config(read_file(opts.config), config);
    if (!opts.host.empty())
        config.host = opts.host;
    if (opts.port)
        config.port = opts.port;
    if (!opts.tests_dir.empty())
        config.tests_dir = opts.tests_dir;
    if (!opts.log.empty())
        config.session_log = opts.log;
    if (opts.reveal_results)
        config.reveal_results = true;
    if (opts.idle_timeout > 0)
        config.idle_timeout = std::chrono::minutes{opts.idle_timeout};

    Service service(config);
    httplib::Server server;
    install_routes(server, service);
    io.err << fmt::format("serving {} test(s) from {} on {}:{}\n", service.list_tests().body.size(),
                          config.tests_dir.string(), config.host, config.port);
    if (!server.listen(config.host, config.port)) {
        io.err << fmt::format("cannot listen on {}:{}\n", config.host, config.port);
        return exit_failure;
    }
    return exit_ok;
}

int cmd_validate(Io &io, const std::string &file)
{
    const TestDefinition test = load_draft(file);
    const auto violations = validate(test);
    io.err << describe(violations);
    if (has_errors(violations))
        return exit_failure;
    io.out << "ok\n";
    return exit_ok;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::istream &in, std::ostream &out, std::ostream &err)
{
    Io io{in, out, err};
    CLI::App app{"Authoring, administration and statistics for personality questionnaires", "psytest"};
    app.require_subcommand(1);

    std::function<int()> action;

    // generate
    auto *gen = app.add_subcommand("generate", "Create and edit .ptest.json test definitions");
    gen->require_subcommand(1);
    std::string file;

    struct {
        std::string id, title, instruction;
        std::vector<std::string> answers;
        bool force = false;
    } new_opts;
    auto *g_new = gen->add_subcommand("new", "Start a new test definition");
    g_new->add_option("file", file, "Output file")->required();
    g_new->add_option("--id", new_opts.id, "Test id")->required();
    g_new->add_option("--title", new_opts.title, "Title")->required();
    g_new->add_option("--answer", new_opts.answers, "Answer option, in order (repeat)")->required();
    g_new->add_option("--instruction", new_opts.instruction, "Instruction shown before the first item");
    g_new->add_flag("--force", new_opts.force, "Overwrite an existing file");
    g_new->callback([&] {
        action = [&] {
            if (fs::exists(file) && !new_opts.force)
                throw Error(ErrorCode::io_error, fmt::format("{} exists; pass --force to overwrite", file));
            save_draft(file, generator::new_test(new_opts.id, new_opts.title, new_opts.answers, new_opts.instruction));
            return int(exit_ok);
        };
    });

    std::string instruction;
    auto *g_instr = gen->add_subcommand("set-instruction", "Replace the instruction text");
    g_instr->add_option("file", file)->required();
    g_instr->add_option("--text", instruction)->required();
    g_instr->callback([&] {
        action = [&] {
            save_draft(file, generator::set_instruction(load_draft(file), instruction));
            return int(exit_ok);
        };
    });

    struct {
        std::string name, id;
    } cat_opts;
    auto *g_cat = gen->add_subcommand("add-category", "Add a psychological category");
    g_cat->add_option("file", file)->required();
    g_cat->add_option("--name", cat_opts.name)->required();
    g_cat->add_option("--id", cat_opts.id, "Explicit category id (default c<N>)");
    g_cat->callback([&] {
        action = [&] {
            std::optional<CategoryId> id;
            if (!cat_opts.id.empty())
                id = CategoryId{cat_opts.id};
            auto test = generator::add_category(load_draft(file), cat_opts.name, id);
            save_draft(file, test);
            io.out << fmt::format("added category {}\n", test.categories.back().id.value);
            return int(exit_ok);
        };
    });

    struct {
        std::string name, kind = "text";
        std::vector<std::string> choices;
    } demo_opts;
    auto *g_demo = gen->add_subcommand("add-demographic", "Declare a demographic field");
    g_demo->add_option("file", file)->required();
    g_demo->add_option("--name", demo_opts.name)->required();
    g_demo->add_option("--kind", demo_opts.kind)->check(CLI::IsMember({"text", "integer", "choice"}));
    g_demo->add_option("--choice", demo_opts.choices, "Allowed value of a choice field (repeat)");
    g_demo->callback([&] {
        action = [&] {
            DemographicField field{demo_opts.name, *parse_demographic_kind(demo_opts.kind), demo_opts.choices};
            save_draft(file, generator::add_demographic_field(load_draft(file), std::move(field)));
            return int(exit_ok);
        };
    });

    struct {
        int pos = 0;
        std::string text;
    } add_opts;
    auto *g_add = gen->add_subcommand("add-item", "Insert an item; later items are renumbered");
    g_add->add_option("file", file)->required();
    g_add->add_option("--pos", add_opts.pos, "Ordinal of the new item (default: append)");
    g_add->add_option("--text", add_opts.text)->required();
    g_add->callback([&] {
        action = [&] {
            auto test = load_draft(file);
            const int pos = add_opts.pos ? add_opts.pos : static_cast<int>(test.items.size()) + 1;
            test = generator::insert_item(std::move(test), pos, add_opts.text);
            save_draft(file, test);
            io.out << fmt::format("added item {} at ordinal {}\n", test.item_at(pos)->id.value, pos);
            return int(exit_ok);
        };
    });

    int ordinal = 0;
    auto *g_del = gen->add_subcommand("del-item", "Delete an item and its bindings; later items are renumbered");
    g_del->add_option("file", file)->required();
    g_del->add_option("--ordinal", ordinal)->required();
    g_del->callback([&] {
        action = [&] {
            save_draft(file, generator::delete_item(load_draft(file), ordinal));
            return int(exit_ok);
        };
    });

    int move_from = 0, move_to = 0;
    auto *g_move = gen->add_subcommand("move-item", "Move an item to another ordinal");
    g_move->add_option("file", file)->required();
    g_move->add_option("--from", move_from)->required();
    g_move->add_option("--to", move_to)->required();
    g_move->callback([&] {
        action = [&] {
            save_draft(file, generator::move_item(load_draft(file), move_from, move_to));
            return int(exit_ok);
        };
    });

    struct {
        std::string category, item_id, values;
        int ordinal = 0;
    } bind_opts;
    auto *g_bind = gen->add_subcommand("bind", "Set the score tuple of an item for a category");
    g_bind->add_option("file", file)->required();
    g_bind->add_option("--category", bind_opts.category, "Category id or name")->required();
    auto *by_ordinal = g_bind->add_option("--item", bind_opts.ordinal, "Item ordinal");
    auto *by_id = g_bind->add_option("--item-id", bind_opts.item_id, "Item id");
    by_ordinal->excludes(by_id);
    g_bind->add_option("--values", bind_opts.values, "Comma-separated scores, one per answer option (use --values=-1,2 for negatives)")
        ->required();
    g_bind->callback([&] {
        action = [&] {
            auto test = load_draft(file);
            ItemId item;
            if (!bind_opts.item_id.empty()) {
                item = ItemId{bind_opts.item_id};
            } else {
                const Item *found = test.item_at(bind_opts.ordinal);
                if (!found)
                    throw Error(ErrorCode::unknown_ordinal, fmt::format("no item with ordinal {}", bind_opts.ordinal));
                item = found->id;
            }
            const CategoryId category = resolve_category(test, bind_opts.category);
            save_draft(file, generator::bind_scale(std::move(test), category, item,
                                                   ScoreTuple{parse_decimals(bind_opts.values)}));
            return int(exit_ok);
        };
    });

    struct {
        std::string category, bounds;
        std::vector<std::string> texts;
    } band_opts;
    auto *g_bands = gen->add_subcommand("set-bands", "Set the norm intervals and interpretations of a category");
    g_bands->add_option("file", file)->required();
    g_bands->add_option("--category", band_opts.category, "Category id or name")->required();
    g_bands->add_option("--bounds", band_opts.bounds, "Comma-separated boundaries from the minimum to the maximum score")
        ->required();
    g_bands->add_option("--text", band_opts.texts, "Interpretation of each interval, in order (repeat)")->required();
    g_bands->callback([&] {
        action = [&] {
            auto test = load_draft(file);
            const CategoryId category = resolve_category(test, band_opts.category);
            const auto bounds = parse_decimals(band_opts.bounds);
            save_draft(file, generator::set_bands(std::move(test), category, bounds, band_opts.texts));
            return int(exit_ok);
        };
    });

    auto *g_validate = gen->add_subcommand("validate", "Check a test definition; exits 1 on errors");
    g_validate->add_option("file", file)->required();
    g_validate->callback([&] { action = [&] { return cmd_validate(io, file); }; });

    // run
    RunOptions run_opts;
    auto *run = app.add_subcommand("run", "Administer a test interactively on the terminal");
    run->add_option("test", run_opts.test, "Test file, or a test name under $PSYTEST_DATA_DIR")->required();
    run->add_option("--log", run_opts.log, "Session log (default $PSYTEST_DATA_DIR/psytest.sessions.ndjson)");
    run->add_option("--session-id", run_opts.session_id, "Session id (default: random)");
    run->add_flag("--show-interpretation", run_opts.show_interpretation, "Print the interpretation at the end");
    run->callback([&] { action = [&] { return cmd_run(io, run_opts); }; });

    // stats
    StatsOptions stats_opts;
    auto *stats = app.add_subcommand("stats", "Descriptive statistics over the session log");
    stats->require_subcommand(1);
    auto *s_summary = stats->add_subcommand("summary", "Print per-category and per-item statistics");
    s_summary->add_option("test", stats_opts.test)->required();
    s_summary->add_option("--log", stats_opts.log);
    s_summary->callback([&] { action = [&] { return cmd_stats_summary(io, stats_opts); }; });
    auto *s_export = stats->add_subcommand("export", "Export sessions as CSV");
    s_export->add_option("test", stats_opts.test)->required();
    s_export->add_option("--log", stats_opts.log);
    s_export->add_option("--format", stats_opts.format)->check(CLI::IsMember({"csv"}));
    s_export->add_option("--what", stats_opts.what, "matrix (one row per session) or summary")
        ->check(CLI::IsMember({"matrix", "summary"}));
    s_export->add_option("-o,--out", stats_opts.output, "Output file (default stdout)");
    s_export->callback([&] { action = [&] { return cmd_stats_export(io, stats_opts); }; });

    // serve
    ServeOptions serve_opts;
    auto *serve = app.add_subcommand("serve", "Run the HTTP service for respondents");
    serve->add_option("--config", serve_opts.config, "JSON config file");
    serve->add_option("--host", serve_opts.host);
    serve->add_option("--port", serve_opts.port);
    serve->add_option("--tests-dir", serve_opts.tests_dir, "Directory of .ptest.json files (default $PSYTEST_DATA_DIR)");
    serve->add_option("--log", serve_opts.log);
    serve->add_flag("--reveal-results", serve_opts.reveal_results, "Let respondents fetch their interpretation");
    serve->add_option("--idle-timeout", serve_opts.idle_timeout, "Minutes before an idle session is dropped (default 30)");
    serve->callback([&] { action = [&] { return cmd_serve(io, serve_opts); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        return action ? action() : int(exit_usage);
    } catch (const InvalidTestError &e) {
        err << describe(e.violations());
        return exit_failure;
    } catch (const Error &e) {
        err << "error " << to_string(e.code()) << ": " << e.what() << '\n';
        return exit_failure;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

} // namespace psytest::gateway
