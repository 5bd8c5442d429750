import { beforeEach, describe, expect, it } from "vitest";
import { ApiError, type AdviceServiceApi } from "../src/api.js";
import { AppController, BANNER_HARD } from "../src/app.js";
import type {
  BundleSummary,
  CreateSessionResponse,
  MoveResponse,
  SessionSnapshot,
  StepEventMsg,
} from "../src/wire.js";

// A hand-rolled world shaped like the switchback fixture: the robot opens
// s1 -> s2, the human at s2 has one allowed, one soft and one hard input.

const GRAPH_TEXT = `digraph arena {
  "s1" [shape=box xlabel="init"];
  "s2" [shape=circle];
  "s3" [shape=box];
  "s4" [shape=box style=filled fillcolor="#cfe2f3" color="#cc0000" penwidth=2];
  "s5" [shape=box];
  "s1" -> "s2" [label="u_p1" color="#38761d" penwidth=2];
  "s2" -> "s3" [label="u_a1"];
  "s2" -> "s4" [label="u_a2" color="#cc0000" style=dashed];
  "s2" -> "s5" [label="u_a3" color="#cc0000" style=dashed];
  "s5" -> "s2" [label="u_p5"];
}`;

const SUMMARY: BundleSummary = {
  generated: 4,
  good: 3,
  truncated: false,
  lambdas: [{ num: 2, den: 1 }, null, { num: 0, den: 1 }, { num: 2, den: 1 }],
  best_index: 2,
  best_lambda: { num: 0, den: 1 },
};

const EV_P1: StepEventMsg = {
  actor: "protagonist", input: "u_p1", from: "s1", to: "s2",
  outcome: "normal", new_adviser_index: null,
};
const EV_A3: StepEventMsg = {
  actor: "adversary", input: "u_a3", from: "s2", to: "s5",
  outcome: "soft_violation", new_adviser_index: 0,
};
const EV_P5: StepEventMsg = {
  actor: "protagonist", input: "u_p5", from: "s5", to: "s2",
  outcome: "normal", new_adviser_index: null,
};
const EV_A2: StepEventMsg = {
  actor: "adversary", input: "u_a2", from: "s2", to: "s4",
  outcome: "hard_violation", new_adviser_index: null,
};

const SNAP_START: SessionSnapshot = {
  state: "s1", owner: "protagonist", halted: "no", advice: null,
  adviser: { index: 2, lambda: { num: 0, den: 1 }, nominal: false },
  forbidden: { s2: ["u_a2", "u_a3"] },
  average: null, rounds: 0, running_sum: 0, history: [],
};

const SNAP_S2: SessionSnapshot = {
  ...SNAP_START,
  state: "s2", owner: "adversary",
  advice: { state: "s2", hard: ["u_a2"], soft: ["u_a3"], allowed: ["u_a1"] },
  history: [EV_P1],
};

const SNAP_S5: SessionSnapshot = {
  state: "s5", owner: "protagonist", halted: "no", advice: null,
  adviser: { index: 0, lambda: { num: 2, den: 1 }, nominal: true },
  forbidden: { s2: ["u_a2"] },
  average: { num: 2, den: 1 }, rounds: 1, running_sum: 2,
  history: [EV_P1, EV_A3],
};

const SNAP_S2_NOMINAL: SessionSnapshot = {
  ...SNAP_S5,
  state: "s2", owner: "adversary",
  advice: { state: "s2", hard: ["u_a2"], soft: [], allowed: ["u_a1", "u_a3"] },
  history: [EV_P1, EV_A3, EV_P5],
};

const SNAP_HALTED: SessionSnapshot = {
  ...SNAP_S2,
  state: "s4", owner: "protagonist", halted: "hard_violation", advice: null,
  average: { num: 2, den: 1 }, rounds: 1, running_sum: 2,
  history: [EV_P1, EV_A2],
};

class StubService implements AdviceServiceApi {
  log: string[] = [];
  snapshot: SessionSnapshot = SNAP_START;
  autoQueue: MoveResponse[] = [{ event: EV_P1, session: SNAP_S2 }];
  moves = new Map<string, MoveResponse>([
    ["u_a3", { event: EV_A3, session: SNAP_S5 }],
    ["u_a2", { event: EV_A2, session: SNAP_HALTED }],
  ]);
  failCreate: ApiError | null = null;

  async listFixtures(): Promise<string[]> {
    this.log.push("fixtures");
    return ["fig1", "fig2", "fig3"];
  }

  async createSession(): Promise<CreateSessionResponse> {
    this.log.push("create");
    if (this.failCreate !== null) throw this.failCreate;
    return { session_id: "deadbeef01", summary: SUMMARY };
  }

  async getState(): Promise<SessionSnapshot> {
    this.log.push("state");
    return this.snapshot;
  }

  async getGraph(): Promise<string> {
    this.log.push("graph");
    return GRAPH_TEXT;
  }

  async postMove(_id: string, input: string): Promise<MoveResponse> {
    this.log.push(`move:${input}`);
    const response = this.moves.get(input);
    if (response === undefined) {
      throw new ApiError(409, "bad_move", `input ${input} is not enabled`, {
        enabled: ["u_a1", "u_a2", "u_a3"],
      });
    }
    this.snapshot = response.session;
    if (input === "u_a3") this.autoQueue.push({ event: EV_P5, session: SNAP_S2_NOMINAL });
    return response;
  }

  async autoStep(): Promise<MoveResponse> {
    this.log.push("auto");
    const next = this.autoQueue.shift();
    if (next === undefined) throw new ApiError(409, "wrong_turn", "not the robot's turn");
    this.snapshot = next.session;
    return next;
  }

  async reset(): Promise<{ session: SessionSnapshot }> {
    this.log.push("reset");
    this.snapshot = SNAP_START;
    this.autoQueue = [{ event: EV_P1, session: SNAP_S2 }];
    return { session: this.snapshot };
  }
}

function makeStorage(): Storage {
  const bag = new Map<string, string>();
  return {
    getItem: (key: string) => bag.get(key) ?? null,
    setItem: (key: string, value: string) => void bag.set(key, value),
    removeItem: (key: string) => void bag.delete(key),
    clear: () => bag.clear(),
    key: () => null,
    get length() {
      return bag.size;
    },
  } as Storage;
}

interface World {
  controller: AppController;
  stub: StubService;
  host: { location: { hash: string; search: string } };
  storage: Storage;
  root: HTMLElement;
}

function makeWorld(overrides?: Partial<Pick<World, "host" | "storage">>): World {
  document.body.innerHTML = '<div id="root"></div>';
  const root = document.getElementById("root") as HTMLElement;
  const stub = new StubService();
  const host = overrides?.host ?? { location: { hash: "", search: "" } };
  const storage = overrides?.storage ?? makeStorage();
  const controller = new AppController(root, stub, { autoDelayMs: 0, storage, host });
  return { controller, stub, host, storage, root };
}

const buttonsIn = (root: HTMLElement) =>
  [...root.querySelectorAll<HTMLButtonElement>("#move-panel button")].map((b) => ({
    input: b.dataset.input,
    cls: b.className,
  }));

describe("session start", () => {
  it("populates the fixture picker on init", async () => {
    const { controller, root } = makeWorld();
    await controller.init();
    const options = [...root.querySelectorAll("#fixture-select option")];
    expect(options.map((o) => o.textContent)).toEqual(["fig1", "fig2", "fig3"]);
  });

  it("plays the robot opening and stops at the human's turn", async () => {
    const { controller, root, host, storage } = makeWorld();
    await controller.startFixture("fig3");
    expect(root.querySelector("#status-line")?.textContent).toBe("your move at s2");
    expect(root.querySelector("#adviser-badge")?.textContent).toBe(
      "adviser #2 ★ λ 0/1 (0.00)",
    );
    expect(buttonsIn(root)).toEqual([
      { input: "u_a1", cls: "move-btn allowed" },
      { input: "u_a2", cls: "move-btn hard" },
      { input: "u_a3", cls: "move-btn soft" },
    ]);
    expect(host.location.hash).toBe("#session=deadbeef01");
    expect(storage.getItem("adviserkit-ui:summary:deadbeef01")).toContain('"generated":4');
    expect(root.querySelector("#summary-panel")?.textContent).toContain("4 candidates, 3 good");
  });

  it("surfaces a create failure without opening the session panel", async () => {
    const { controller, stub, root } = makeWorld();
    stub.failCreate = new ApiError(409, "no_good_adviser", "no good adviser exists");
    await controller.startFixture("fig3");
    const error = root.querySelector("#error-line") as HTMLElement;
    expect(error.hidden).toBe(false);
    expect(error.textContent).toBe("no_good_adviser: no good adviser exists");
    expect((root.querySelector("#session-panel") as HTMLElement).hidden).toBe(true);
  });
});

describe("move guard", () => {
  it("never sends an input the service did not offer", async () => {
    const { controller, stub } = makeWorld();
    await controller.startFixture("fig3");
    const sent = stub.log.filter((entry) => entry.startsWith("move:"));
    expect(await controller.applyMove("u_p1")).toBeNull();
    expect(await controller.applyMove("nonsense")).toBeNull();
    expect(stub.log.filter((entry) => entry.startsWith("move:"))).toEqual(sent);
  });

  it("ignores clicks while scrubbing history", async () => {
    const { controller, stub } = makeWorld();
    await controller.startFixture("fig3");
    controller.setReplay(0);
    expect(await controller.applyMove("u_a1")).toBeNull();
    expect(stub.log.some((entry) => entry.startsWith("move:"))).toBe(false);
  });
});

describe("soft violation", () => {
  it("switches advisers, shows the banner, and the robot replies", async () => {
    const { controller, root } = makeWorld();
    await controller.startFixture("fig3");
    const event = await controller.applyMove("u_a3");
    expect(event?.outcome).toBe("soft_violation");
    const banner = root.querySelector(".banner.switch");
    expect(banner?.textContent).toBe(
      "soft advice violated: adviser #2 (λ 0/1 (0.00)) → adviser #0 nominal (λ 2/1 (2.00))",
    );
    // the robot's normal reply does not wipe the banner
    expect(root.querySelector("#status-line")?.textContent).toBe("your move at s2");
    expect(root.querySelector("#adviser-badge")?.textContent).toBe(
      "adviser #0 (nominal) λ 2/1 (2.00)",
    );
    expect(root.querySelector("#average-display")?.textContent).toBe(
      "running average 2/1 (2.00) over 1 round",
    );
    expect(buttonsIn(root)).toEqual([
      { input: "u_a1", cls: "move-btn allowed" },
      { input: "u_a2", cls: "move-btn hard" },
      { input: "u_a3", cls: "move-btn allowed" },
    ]);
  });
});

describe("hard violation", () => {
  it("freezes the session behind a terminal banner", async () => {
    const { controller, root, stub } = makeWorld();
    await controller.startFixture("fig3");
    const event = await controller.applyMove("u_a2");
    expect(event?.outcome).toBe("hard_violation");
    expect(root.querySelector(".banner.terminal")?.textContent).toBe(BANNER_HARD);
    expect(root.querySelector("#status-line")?.textContent).toBe(
      "halted (hard_violation) at s4",
    );
    expect(buttonsIn(root)).toEqual([]);
    expect(root.querySelector("#move-panel")?.textContent).toContain(
      "session halted (hard_violation)",
    );
    const sent = stub.log.filter((entry) => entry.startsWith("move:"));
    expect(await controller.applyMove("u_a1")).toBeNull();
    expect(stub.log.filter((entry) => entry.startsWith("move:"))).toEqual(sent);
  });
});

describe("replay", () => {
  it("scrubs the graph highlight and dims later events", async () => {
    const { controller, root } = makeWorld();
    await controller.startFixture("fig3");
    await controller.applyMove("u_a3");
    controller.setReplay(0);
    expect(root.querySelector('g[data-id="s1"]')?.getAttribute("class")).toContain("current");
    expect(root.querySelectorAll("#event-log .future")).toHaveLength(3);
    expect(root.querySelector("#replay-label")?.textContent).toBe("step 0/3");
    expect(buttonsIn(root)).toEqual([]);
    expect(root.querySelector("#move-panel")?.textContent).toContain("scrubbing history");

    controller.setReplay(2);
    expect(root.querySelector('g[data-id="s5"]')?.getAttribute("class")).toContain("current");

    controller.setReplay(3);
    expect(root.querySelector("#replay-label")?.textContent).toBe("step 3/3 (live)");
    expect(buttonsIn(root)).toHaveLength(3);
  });

  it("exports the full move list as a script document", async () => {
    const { controller } = makeWorld();
    await controller.startFixture("fig3");
    await controller.applyMove("u_a3");
    expect(controller.exportScript()).toBe("script v1\nmove u_p1\nmove u_a3\nmove u_p5\n");
  });
});

describe("refresh", () => {
  it("restores the same screen from the session id alone", async () => {
    const first = makeWorld();
    await first.controller.startFixture("fig3");
    await first.controller.applyMove("u_a3");
    const before = {
      status: first.root.querySelector("#status-line")?.textContent,
      badge: first.root.querySelector("#adviser-badge")?.textContent,
      average: first.root.querySelector("#average-display")?.textContent,
      banner: first.root.querySelector(".banner")?.textContent,
      buttons: buttonsIn(first.root),
      summary: first.root.querySelector("#summary-panel")?.textContent,
      log: [...first.root.querySelectorAll("#event-log li")].map((li) => li.textContent),
    };

    // same hash and storage, fresh DOM and controller: a page reload
    const second = makeWorld({ host: first.host, storage: first.storage });
    second.stub.snapshot = SNAP_S2_NOMINAL;
    await second.controller.init();
    const after = {
      status: second.root.querySelector("#status-line")?.textContent,
      badge: second.root.querySelector("#adviser-badge")?.textContent,
      average: second.root.querySelector("#average-display")?.textContent,
      banner: second.root.querySelector(".banner")?.textContent,
      buttons: buttonsIn(second.root),
      summary: second.root.querySelector("#summary-panel")?.textContent,
      log: [...second.root.querySelectorAll("#event-log li")].map((li) => li.textContent),
    };
    expect(after).toEqual(before);
  });

  it("degrades gracefully in a tab without the cached summary", async () => {
    const first = makeWorld();
    await first.controller.startFixture("fig3");
    await first.controller.applyMove("u_a3");

    const second = makeWorld({ host: first.host });
    second.stub.snapshot = SNAP_S2_NOMINAL;
    await second.controller.init();
    expect(second.root.querySelector("#summary-panel")?.textContent).toContain(
      "candidate list unavailable",
    );
    // the switch banner still re-derives its target from the live snapshot
    expect(second.root.querySelector(".banner.switch")?.textContent).toContain(
      "adviser #0 nominal (λ 2/1 (2.00))",
    );
  });
});

describe("reset", () => {
  it("clears the banner and replays the opening", async () => {
    const { controller, root } = makeWorld();
    await controller.startFixture("fig3");
    await controller.applyMove("u_a3");
    expect(root.querySelector(".banner")).not.toBeNull();
    await controller.resetSession();
    expect(root.querySelector(".banner")).toBeNull();
    expect(root.querySelector("#status-line")?.textContent).toBe("your move at s2");
    expect(root.querySelectorAll("#event-log li")).toHaveLength(1);
  });
});
