import { describe, expect, it } from "vitest";

import { parseRoute, serializeRoute, type ViewRoute } from "../src/routes.js";

const ALL_ROUTES: ViewRoute[] = [
  { view: "home" },
  { view: "search", criterion: "works", query: "graph rank", page: 2, sort: "relevance" },
  { view: "search", criterion: "authors", query: "müller", page: 1, sort: "citations" },
  { view: "search", criterion: "institutions", query: "MIT & co", page: 1, sort: "title" },
  { view: "search", criterion: "venues", query: "acl", page: 3, sort: "title" },
  { view: "work", id: "W1", tab: "details" },
  { view: "work", id: "W1", tab: "citations" },
  { view: "work", id: "W1", tab: "similar" },
  { view: "work", id: "W1", tab: "discussion" },
  { view: "author", id: "A1", tab: "works" },
  { view: "author", id: "A1", tab: "coauthors" },
  { view: "author", id: "A1", tab: "focus" },
  { view: "institution", id: "I1" },
  { view: "venue", id: "V2" },
  { view: "path", from: "A1", to: "A3" },
  { view: "login" },
];

describe("deep-link fidelity", () => {
  it.each(ALL_ROUTES.map((route) => [serializeRoute(route), route] as const))(
    "parse(serialize) is identity for %s",
    (_serialized, route) => {
      expect(parseRoute(serializeRoute(route))).toEqual(route);
    },
  );

  it("round-trips ids with special characters", () => {
    const route: ViewRoute = { view: "work", id: "W/1 ü?", tab: "details" };
    expect(parseRoute(serializeRoute(route))).toEqual(route);
  });

  it("round-trips unicode queries", () => {
    const route: ViewRoute = {
      view: "search",
      criterion: "authors",
      query: "universität hamburg",
      page: 1,
      sort: "relevance",
    };
    expect(parseRoute(serializeRoute(route))).toEqual(route);
  });
});

describe("parse robustness", () => {
  it("unknown fragments fall back to home", () => {
    expect(parseRoute("#/nope")).toEqual({ view: "home" });
    expect(parseRoute("#/works/W1/bogus-tab")).toEqual({ view: "home" });
    expect(parseRoute("#/search/papers?q=x")).toEqual({ view: "home" });
    expect(parseRoute("")).toEqual({ view: "home" });
    expect(parseRoute("#/")).toEqual({ view: "home" });
  });

  it("missing path params fall back to home", () => {
    expect(parseRoute("#/path?from=A1")).toEqual({ view: "home" });
  });

  it("defaults page and sort", () => {
    expect(parseRoute("#/search/works?q=ranking")).toEqual({
      view: "search",
      criterion: "works",
      query: "ranking",
      page: 1,
      sort: "relevance",
    });
  });

  it("rejects nonsense page numbers", () => {
    expect(parseRoute("#/search/works?q=x&page=-3")).toMatchObject({ page: 1 });
    expect(parseRoute("#/search/works?q=x&page=zzz")).toMatchObject({ page: 1 });
  });
});
