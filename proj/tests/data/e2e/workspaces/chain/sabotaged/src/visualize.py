import numpy as np
import matplotlib.pyplot as plt


def plot_hidden(states, path, dpi=120):
    fig, ax = plt.subplots(figsize=(16, 9))
    ax.imshow(np.asarray(states).T, aspect="auto", cmap="viridis")
    ax.set_xlabel("step")
    ax.set_ylabel("unit")
    fig.savefig(path, dpi=dpi)


def plot_future(pred, path):
    fig, ax = plt.subplots()
    ax.plot(pred)
    ax.set_title("predicted future")
    fig.savefig(path)
