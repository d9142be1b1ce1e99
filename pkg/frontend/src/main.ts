/** Browser bootstrap: wire the scene controller to the page. */

import { HttpTransport } from "./transport.js";
import { SceneController } from "./scenes.js";
import { renderToDom } from "./dom.js";

function studyFromQuery(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("study") ?? "study1";
}

export async function boot(root: HTMLElement): Promise<void> {
  const transport = new HttpTransport(window.location.origin);
  const controller = new SceneController(transport);

  const redraw = () => renderToDom(root, controller.screen(), { onButton });

  async function onButton(id: string, inputs: Record<string, string>) {
    try {
      if (id === "begin") {
        await controller.proceed();
      } else if (id === "submit-allocation") {
        const policy = inputs["allocation"] ?? "proportional";
        await controller.submitAllocation(policy as never);
      } else if (id === "submit-order") {
        await controller.submitOrder(inputs["order"] ?? "");
      } else if (id === "submit-bubble") {
        await controller.submitBubble(inputs["bubble"] ?? "");
        if (controller.scene() !== "meeting") {
          await maybeProceed();
        }
      } else if (id === "submit-survey") {
        const answers: Record<string, string> = {};
        for (const [key, value] of Object.entries(inputs)) {
          if (key.startsWith("survey-")) answers[key] = value;
        }
        await controller.submitSurvey(answers);
      }
      if (["await_review"].includes(controller.state.phase ?? "")) {
        await maybeProceed();
      }
    } catch (err) {
      console.error(err);
    }
    redraw();
  }

  async function maybeProceed() {
    if (controller.state.phase === "await_review") {
      await controller.proceed();
    }
  }

  await controller.start(studyFromQuery());
  redraw();
}

const root = document.getElementById("game");
if (root) {
  boot(root).catch((err) => {
    root.textContent = `Failed to start: ${err}`;
  });
}
